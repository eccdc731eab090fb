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

#include "cuspfusion/pipeline.hpp"

#include <openssl/evp.h>

#include <charconv>
#include <cmath>
#include <memory>
#include <system_error>

#include "cuspfusion/error.hpp"
#include "cuspfusion/metrics.hpp"
#include "cuspfusion/serialize.hpp"
#include "cuspfusion/svg.hpp"

namespace cuspfusion {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_value(std::string_view key, std::string_view value) {
  T out{};
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (value.empty() || ec != std::errc() || ptr != value.data() + value.size()) {
    throw ConfigError(std::string(key), "cannot parse '" + std::string(value) + "'");
  }
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(out)) throw ConfigError(std::string(key), "must be finite");
  }
  return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  throw ConfigError(std::string(key), "expected a boolean, got '" + std::string(value) + "'");
}

}  // namespace

void RunConfig::validate() const {
  const SamplerConfig& s = sampler;
  if (s.n < 1) throw ConfigError("n", "must be >= 1");
  if (!(s.sigma > 0.0)) throw ConfigError("sigma", "must be > 0");
  if (!(lambda >= 0.0)) throw ConfigError("lambda", "must be >= 0");
  if (grid_resolution < 2) throw ConfigError("resolution", "must be >= 2");
  if (!(s.a_range.lo < s.a_range.hi)) throw ConfigError("a_min", "must be below a_max");
  if (!(s.b_range.lo < s.b_range.hi)) throw ConfigError("b_min", "must be below b_max");
  if (!(s.x0_range.lo < s.x0_range.hi)) throw ConfigError("x0_min", "must be below x0_max");
  if (!(s.minimizer.initial_step > 0.0)) throw ConfigError("nm_initial_step", "must be > 0");
  if (!(s.minimizer.x_tolerance > 0.0)) throw ConfigError("nm_x_tolerance", "must be > 0");
  if (!(s.minimizer.f_tolerance > 0.0)) throw ConfigError("nm_f_tolerance", "must be > 0");
  if (s.minimizer.max_iterations < 1) throw ConfigError("nm_max_iterations", "must be >= 1");
  if (output_dir.empty()) throw ConfigError("out", "must not be empty");
}

void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value) {
  SamplerConfig& s = cfg.sampler;
  if (key == "n") {
    const auto n = parse_value<long long>(key, value);
    if (n < 1) throw ConfigError("n", "must be >= 1");
    s.n = static_cast<std::size_t>(n);
  } else if (key == "seed") {
    s.seed = parse_value<std::uint64_t>(key, value);
  } else if (key == "sigma") {
    s.sigma = parse_value<double>(key, value);
  } else if (key == "lambda") {
    cfg.lambda = parse_value<double>(key, value);
  } else if (key == "resolution") {
    cfg.grid_resolution = parse_value<int>(key, value);
  } else if (key == "out") {
    if (value.empty()) throw ConfigError("out", "must not be empty");
    cfg.output_dir = std::string(value);
  } else if (key == "svg") {
    cfg.emit_svg = parse_bool(key, value);
  } else if (key == "exact") {
    s.exact_mode = parse_bool(key, value);
  } else if (key == "a_min") {
    s.a_range.lo = parse_value<double>(key, value);
  } else if (key == "a_max") {
    s.a_range.hi = parse_value<double>(key, value);
  } else if (key == "b_min") {
    s.b_range.lo = parse_value<double>(key, value);
  } else if (key == "b_max") {
    s.b_range.hi = parse_value<double>(key, value);
  } else if (key == "x0_min") {
    s.x0_range.lo = parse_value<double>(key, value);
  } else if (key == "x0_max") {
    s.x0_range.hi = parse_value<double>(key, value);
  } else if (key == "nm_initial_step") {
    s.minimizer.initial_step = parse_value<double>(key, value);
  } else if (key == "nm_x_tolerance") {
    s.minimizer.x_tolerance = parse_value<double>(key, value);
  } else if (key == "nm_f_tolerance") {
    s.minimizer.f_tolerance = parse_value<double>(key, value);
  } else if (key == "nm_max_iterations") {
    s.minimizer.max_iterations = parse_value<int>(key, value);
  } else {
    throw ConfigError(std::string(key), "unknown key");
  }
}

RunConfig parse_config_text(std::string_view text, RunConfig base) {
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(std::string(line), "expected key=value");
    }
    apply_setting(base, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return base;
}

RunConfig parse_config(const std::optional<std::filesystem::path>& file,
                       const ConfigOverrides& overrides) {
  RunConfig cfg;
  if (file) {
    std::string text;
    try {
      text = read_text_file(*file);
    } catch (const Error& e) {
      throw ConfigError("config", e.what());
    }
    cfg = parse_config_text(text, cfg);
  }
  for (const auto& [key, value] : overrides) apply_setting(cfg, key, value);
  cfg.validate();
  return cfg;
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xF];
  }
  return out;
}

ArtifactWriter::ArtifactWriter(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw ConfigError("out", "cannot create '" + dir_.string() + "': " + ec.message());
}

void ArtifactWriter::write(std::string_view name, std::string_view contents) {
  write_text_file(path(name), contents);
  entries_.push_back({std::string(name), sha256_hex(contents), contents.size()});
}

std::string manifest_to_json(const Manifest& manifest) {
  nlohmann::ordered_json doc;
  doc["status"] = manifest.complete ? "complete" : "partial";
  if (!manifest.complete) doc["error"] = manifest.error;
  doc["files"] = nlohmann::ordered_json::array();
  for (const ManifestEntry& e : manifest.files) {
    doc["files"].push_back({{"path", e.path}, {"sha256", e.sha256}, {"bytes", e.bytes}});
  }
  return dump(doc);
}

std::string cusp_curve_csv(Interval a_range, Interval b_range, int samples) {
  const double a_reach = std::max(std::abs(a_range.lo), std::abs(a_range.hi));
  const double b_lo = std::max(0.0, b_range.lo);
  const double b_hi = std::min(b_range.hi, fold_boundary_b(a_reach));
  std::string out = "b,a\n";
  if (!(b_hi > b_lo)) return out;
  for (int pass = 0; pass < 2; ++pass) {
    for (int i = 0; i <= samples; ++i) {
      const int k = pass == 0 ? samples - i : i;
      if (pass == 1 && i == 0) continue;
      const double b = b_lo + (b_hi - b_lo) * k / samples;
      const double a = (pass == 0 ? 1.0 : -1.0) * cusp_half_width(b);
      if (!a_range.contains(a)) continue;
      out += format_double(b) + "," + format_double(a) + "\n";
    }
  }
  return out;
}

std::string switching_lines_csv() {
  std::string out = "a,b\n";
  for (const double a : {0.5, -0.5}) out += format_double(a) + "," + format_double(fold_boundary_b(a)) + "\n";
  return out;
}

std::string scatter_csv(std::span<const Person> population) {
  std::string out = "id,a,b,x,y\n";
  for (const Person& p : population) {
    out += std::to_string(p.id) + "," + format_double(p.a) + "," + format_double(p.b) + "," +
           format_double(p.x) + "," + std::to_string(p.y) + "\n";
  }
  return out;
}

PipelineOutcome run_pipeline(const RunConfig& cfg) {
  PipelineOutcome outcome;
  std::unique_ptr<ArtifactWriter> out;
  try {
    cfg.validate();
    out = std::make_unique<ArtifactWriter>(cfg.output_dir);
  } catch (const ConfigError& e) {
    outcome.exit_status = 2;
    outcome.manifest.error = e.what();
    return outcome;
  }

  try {
    const std::vector<Person> population = sample_population(cfg.sampler);
    out->write(artifact::kPopulation, to_csv(population_table(population)));

    const SplitTables tables = split(population);
    out->write(artifact::kDbA, to_csv(tables.db_a));
    out->write(artifact::kDbB, to_csv(tables.db_b));
    const DbTable joined = join(tables.db_a, tables.db_b);
    out->write(artifact::kJoined, to_csv(joined));

    const FittedModel model_a = fit(joined, kSpecA, cfg.lambda);
    const FittedModel model_b = fit(joined, kSpecB, cfg.lambda);
    const FittedModel model_joint = fit(joined, kSpecJoint, cfg.lambda);
    out->write(artifact::kModelA, dump(to_json(model_a)));
    out->write(artifact::kModelB, dump(to_json(model_b)));
    out->write(artifact::kModelJoint, dump(to_json(model_joint)));

    const Interval a_range = cfg.sampler.a_range;
    const Interval b_range = cfg.sampler.b_range;
    const int res = cfg.grid_resolution;
    const ProbabilityGrid grid_a = probability_grid(model_a, a_range, b_range, res);
    const ProbabilityGrid grid_b = probability_grid(model_b, a_range, b_range, res);
    const ProbabilityGrid grid_joint = probability_grid(model_joint, a_range, b_range, res);
    out->write(artifact::kGridA, grid_to_csv(grid_a));
    out->write(artifact::kGridB, grid_to_csv(grid_b));
    out->write(artifact::kGridJoint, grid_to_csv(grid_joint));

    out->write(artifact::kScatter, scatter_csv(population));
    out->write(artifact::kCuspCurve, cusp_curve_csv(a_range, b_range));
    out->write(artifact::kSwitchingLines, switching_lines_csv());

    const std::vector<SusceptibilityRecord> targets = rank_targets(population);
    out->write(artifact::kSusceptibility, susceptibility_to_csv(targets));

    const FusionReport report = fusion_gain(joined, model_a, model_b, model_joint, targets);
    out->write(artifact::kFusionReport, dump(to_json(report)));

    if (cfg.emit_svg) {
      const std::span<const Person> people(population);
      const auto svg = [&](FigureKind kind, const FigureData& data) {
        out->write(std::string(figure_stem(kind)) + ".svg", render_svg(kind, data));
      };
      svg(FigureKind::ProbabilityA, std::cref(grid_a));
      svg(FigureKind::ProbabilityB, std::cref(grid_b));
      svg(FigureKind::SampledVotes, people);
      svg(FigureKind::ProbabilityJoint, std::cref(grid_joint));
      svg(FigureKind::LatentBistability, people);
      svg(FigureKind::VotesWithSwitching, people);
    }
    outcome.manifest.complete = true;
  } catch (const std::exception& e) {
    outcome.exit_status = 3;
    outcome.manifest.error = e.what();
  }

  outcome.manifest.files = out->entries();
  try {
    write_text_file(out->path(artifact::kManifest), manifest_to_json(outcome.manifest));
  } catch (const std::exception& e) {
    outcome.exit_status = 3;
    if (outcome.manifest.error.empty()) outcome.manifest.error = e.what();
  }
  return outcome;
}

}  // namespace cuspfusion
