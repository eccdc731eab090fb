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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cuspfusion/datastore.hpp"
#include "cuspfusion/influence.hpp"
#include "cuspfusion/logistic.hpp"
#include "cuspfusion/sampler.hpp"

namespace cuspfusion {

struct RunConfig {
  SamplerConfig sampler;
  double lambda = 1.0;
  int grid_resolution = 100;
  std::filesystem::path output_dir = "out";
  bool emit_svg = true;

  /// Throws ConfigError naming the offending key.
  void validate() const;
};

/// Recognized keys: n, seed, sigma, lambda, resolution, out, svg, exact,
/// a_min, a_max, b_min, b_max, x0_min, x0_max, nm_initial_step,
/// nm_x_tolerance, nm_f_tolerance, nm_max_iterations.
/// Throws ConfigError for unknown keys and unparsable values.
void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value);

/// Flat `key=value` lines; `#` starts a comment; blank lines ignored.
RunConfig parse_config_text(std::string_view text, RunConfig base = {});

using ConfigOverrides = std::vector<std::pair<std::string, std::string>>;

/// File settings first, then overrides in order, then validation.
RunConfig parse_config(const std::optional<std::filesystem::path>& file,
                       const ConfigOverrides& overrides);

// Artifact file names inside the output directory.
namespace artifact {
inline constexpr std::string_view kPopulation = "population.csv";
inline constexpr std::string_view kDbA = "db_a.csv";
inline constexpr std::string_view kDbB = "db_b.csv";
inline constexpr std::string_view kJoined = "joined.csv";
inline constexpr std::string_view kModelA = "model_a.json";
inline constexpr std::string_view kModelB = "model_b.json";
inline constexpr std::string_view kModelJoint = "model_joint.json";
inline constexpr std::string_view kGridA = "grid_a.csv";
inline constexpr std::string_view kGridB = "grid_b.csv";
inline constexpr std::string_view kGridJoint = "grid_joint.csv";
inline constexpr std::string_view kScatter = "scatter.csv";
inline constexpr std::string_view kCuspCurve = "cusp_curve.csv";
inline constexpr std::string_view kSwitchingLines = "switching_lines.csv";
inline constexpr std::string_view kSusceptibility = "susceptibility.csv";
inline constexpr std::string_view kFusionReport = "fusion_report.json";
inline constexpr std::string_view kIntervention = "intervention.json";
inline constexpr std::string_view kManifest = "manifest.json";
}  // namespace artifact

std::string sha256_hex(std::string_view data);

struct ManifestEntry {
  std::string path;  // relative to the output directory
  std::string sha256;
  std::uintmax_t bytes = 0;
};

/// Writes files into one directory and records their hashes.
class ArtifactWriter {
 public:
  explicit ArtifactWriter(std::filesystem::path dir);

  const std::filesystem::path& dir() const noexcept { return dir_; }
  std::filesystem::path path(std::string_view name) const { return dir_ / name; }

  void write(std::string_view name, std::string_view contents);
  const std::vector<ManifestEntry>& entries() const noexcept { return entries_; }

 private:
  std::filesystem::path dir_;
  std::vector<ManifestEntry> entries_;
};

struct Manifest {
  std::vector<ManifestEntry> files;
  bool complete = false;
  std::string error;  // set when the run aborted part-way
};

std::string manifest_to_json(const Manifest& manifest);

struct PipelineOutcome {
  int exit_status = 0;  // 0 ok, 2 config error, 3 pipeline error
  Manifest manifest;
};

/// Feature specs of the three compared models.
inline constexpr FeatureSpec kSpecA{InputSet::A, 3};
inline constexpr FeatureSpec kSpecB{InputSet::B, 3};
inline constexpr FeatureSpec kSpecJoint{InputSet::AB, 3};

/// Points of the cusp curve |a| = 2 (b/3)^(3/2) inside the given box, upper
/// branch then lower branch, as CSV "b,a".
std::string cusp_curve_csv(Interval a_range, Interval b_range, int samples = 200);

/// The b = fold_boundary_b(+-1/2) switching points as CSV "a,b".
std::string switching_lines_csv();

/// Scatter data (id, a, b, x, y) for the vote and latent-state figures.
std::string scatter_csv(std::span<const Person> population);

/// Generates, splits, joins, fits, grids, ranks and reports, writing every
/// artifact (and the manifest) into cfg.output_dir. Never throws for
/// pipeline failures: they come back as exit status 3 with a partial manifest.
PipelineOutcome run_pipeline(const RunConfig& cfg);

}  // namespace cuspfusion
