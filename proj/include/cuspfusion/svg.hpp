// Copyright 2026 The cuspfusion Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <variant>

#include "cuspfusion/logistic.hpp"
#include "cuspfusion/sampler.hpp"

namespace cuspfusion {

enum class FigureKind {
  ProbabilityA,        // P(y=1 | a) heatmap, DB_A alone
  ProbabilityB,        // P(y=1 | b) heatmap, DB_B alone
  SampledVotes,        // votes over (b, a) with the cusp curve
  ProbabilityJoint,    // P(y=1 | a, b) heatmap from the joined tables
  LatentBistability,   // latent x against b
  VotesWithSwitching,  // votes, cusp curve and the |a| = 1/2 switching lines
};

std::string_view figure_stem(FigureKind kind);

using FigureData =
    std::variant<std::reference_wrapper<const ProbabilityGrid>, std::span<const Person>>;

/// Self-contained SVG document. Heatmap kinds need a grid, the others a
/// population. Throws RenderError on empty or mismatched data.
std::string render_svg(FigureKind kind, const FigureData& data);

void render_svg(FigureKind kind, const FigureData& data, const std::filesystem::path& path);

}  // namespace cuspfusion
