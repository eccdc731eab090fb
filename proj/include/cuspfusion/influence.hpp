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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cuspfusion/cusp.hpp"
#include "cuspfusion/datastore.hpp"
#include "cuspfusion/logistic.hpp"
#include "cuspfusion/metrics.hpp"
#include "cuspfusion/sampler.hpp"

namespace cuspfusion {

/// Which minimum a person occupies relative to the sign of a.
///
///  - Aligned: bistable, sign(x) == sign(a). This minimum survives every
///    change of b, so b alone cannot flip the vote.
///  - Metastable: bistable, sign(x) != sign(a). Lowering b below the fold
///    erases this minimum and the state jumps to the other branch.
///  - MonostableNeutral: a single minimum, or a == 0 where neither branch is
///    preferred.
enum class Branch { Aligned, Metastable, MonostableNeutral };

enum class FlipDirection { ToOne, ToZero };

std::string_view to_string(Branch b);
std::string_view to_string(FlipDirection d);

struct SusceptibilityRecord {
  std::int64_t id = 0;
  Branch branch = Branch::MonostableNeutral;
  std::optional<double> delta_b_flip;  // b - fold_boundary_b(a), metastable only
  std::optional<FlipDirection> flip_direction;
  bool on_degenerate = false;
};

struct InterventionResult {
  std::int64_t id = 0;
  double new_b = 0.0;
  double new_x = 0.0;
  double new_p = 0.0;
  bool flipped = false;
};

/// Throws DegenerateParameters when (a, b) lies on the cusp curve.
SusceptibilityRecord susceptibility(const Person& person);

/// Metastable records first by ascending delta_b_flip (ties by id), then the
/// rest by id. Persons on the cusp curve are kept, flagged on_degenerate.
std::vector<SusceptibilityRecord> rank_targets(std::span<const Person> population);

/// Moves b to new_b and re-minimizes starting from the person's current x,
/// so the state stays on its branch until that branch disappears.
InterventionResult apply_intervention(const Person& person, double new_b,
                                      const MinimizerConfig& cfg = {}, double sigma = 10.0);

/// Latent states along a sequence of b values, each step re-minimized from
/// the previous state.
std::vector<double> hysteresis_path(const Person& person, std::span<const double> b_values,
                                    const MinimizerConfig& cfg = {});

/// CSV with header "id,branch,delta_b_flip,flip_direction"; absent optionals
/// are empty fields.
std::string susceptibility_to_csv(std::span<const SusceptibilityRecord> records);

struct MetricsDelta {
  double log_loss = 0.0;
  double auc = 0.0;
  double accuracy = 0.0;
};

MetricsDelta operator-(const MetricsReport& lhs, const MetricsReport& rhs);

struct FusionReport {
  MetricsReport model_a;
  MetricsReport model_b;
  MetricsReport model_joint;
  MetricsDelta joint_minus_a;
  MetricsDelta joint_minus_b;
  MetricsDelta a_minus_b;
  std::optional<IndependenceResult> independence;  // absent when too few rows
  std::size_t population = 0;
  std::size_t metastable_count = 0;
  double metastable_fraction = 0.0;
};

/// Scores the three models on `joined` and summarizes what the join adds.
FusionReport fusion_gain(const DbTable& joined, const FittedModel& model_a,
                         const FittedModel& model_b, const FittedModel& model_joint,
                         std::span<const SusceptibilityRecord> targets);

}  // namespace cuspfusion
