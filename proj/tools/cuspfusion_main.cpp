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

// Command-line front end: every pipeline step as a subcommand working on
// files in the output directory, plus `all` for the full run.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "cuspfusion/datastore.hpp"
#include "cuspfusion/error.hpp"
#include "cuspfusion/influence.hpp"
#include "cuspfusion/logistic.hpp"
#include "cuspfusion/pipeline.hpp"
#include "cuspfusion/serialize.hpp"
#include "cuspfusion/svg.hpp"

namespace fs = std::filesystem;
using namespace cuspfusion;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitPipeline = 3;

FittedModel load_model(const ArtifactWriter& out, std::string_view name) {
  return model_from_json(nlohmann::json::parse(read_text_file(out.path(name))));
}

std::vector<Person> load_population(const ArtifactWriter& out) {
  return population_from_table(import_csv(out.path(artifact::kPopulation), kPopulationSchema));
}

void print_written(const ArtifactWriter& out) {
  for (const ManifestEntry& e : out.entries()) {
    std::cout << (out.dir() / e.path).string() << "  " << e.sha256 << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cusp-bifurcation vote simulator and database-fusion analysis"};
  app.require_subcommand(1);
  app.fallthrough();

  std::optional<std::string> config_path;
  ConfigOverrides overrides;
  const auto flag = [&](const std::string& name, const std::string& key, const std::string& help) {
    app.add_option_function<std::string>(
        name, [&overrides, key](const std::string& v) { overrides.emplace_back(key, v); }, help);
  };
  app.add_option("--config", config_path, "key=value configuration file");
  flag("--seed", "seed", "RNG seed (u64)");
  flag("--n", "n", "population size");
  flag("--sigma", "sigma", "logistic steepness of the vote probability");
  flag("--lambda", "lambda", "L2 regularization strength");
  flag("--resolution", "resolution", "probability grid resolution");
  flag("--out", "out", "output directory");
  app.add_flag_callback("--no-svg", [&] { overrides.emplace_back("svg", "false"); },
                        "skip SVG figures");
  app.add_flag_callback("--exact", [&] { overrides.emplace_back("exact", "true"); },
                        "resolve latent minima with the closed-form cubic");

  auto* generate = app.add_subcommand("generate", "sample a population -> population.csv");
  auto* split_cmd = app.add_subcommand("split", "population.csv -> db_a.csv, db_b.csv");
  auto* join_cmd = app.add_subcommand("join", "db_a.csv + db_b.csv -> joined.csv");
  auto* fit_cmd = app.add_subcommand("fit", "joined.csv -> model_{a,b,joint}.json");
  auto* grid_cmd = app.add_subcommand("grid", "models -> grid_{a,b,joint}.csv");
  auto* rank_cmd = app.add_subcommand("rank", "population.csv -> susceptibility.csv");
  auto* intervene = app.add_subcommand("intervene", "move one person's b and re-minimize");
  auto* report_cmd = app.add_subcommand("report", "joined.csv + models -> fusion_report.json");
  auto* all_cmd = app.add_subcommand("all", "run the whole pipeline with a manifest");

  std::int64_t target_id = 0;
  double new_b = 0.0;
  intervene->add_option("--id", target_id, "person id")->required();
  intervene->add_option("--new-b", new_b, "new behavior index")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  RunConfig cfg;
  try {
    cfg = parse_config(config_path ? std::optional<fs::path>(*config_path) : std::nullopt,
                       overrides);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }

  if (all_cmd->parsed()) {
    const PipelineOutcome outcome = run_pipeline(cfg);
    for (const ManifestEntry& e : outcome.manifest.files) {
      std::cout << (cfg.output_dir / e.path).string() << "  " << e.sha256 << "\n";
    }
    if (outcome.exit_status != 0) {
      std::cerr << (outcome.exit_status == kExitConfig ? "config error: " : "pipeline error: ")
                << outcome.manifest.error << "\n";
    }
    return outcome.exit_status;
  }

  try {
    ArtifactWriter out(cfg.output_dir);
    if (generate->parsed()) {
      out.write(artifact::kPopulation, to_csv(population_table(sample_population(cfg.sampler))));
    } else if (split_cmd->parsed()) {
      const SplitTables t = split(load_population(out));
      out.write(artifact::kDbA, to_csv(t.db_a));
      out.write(artifact::kDbB, to_csv(t.db_b));
    } else if (join_cmd->parsed()) {
      const DbTable joined = join(import_csv(out.path(artifact::kDbA), kDbASchema),
                                  import_csv(out.path(artifact::kDbB), kDbBSchema));
      out.write(artifact::kJoined, to_csv(joined));
    } else if (fit_cmd->parsed()) {
      const DbTable joined = import_csv(out.path(artifact::kJoined), kJoinedSchema);
      out.write(artifact::kModelA, dump(to_json(fit(joined, kSpecA, cfg.lambda))));
      out.write(artifact::kModelB, dump(to_json(fit(joined, kSpecB, cfg.lambda))));
      out.write(artifact::kModelJoint, dump(to_json(fit(joined, kSpecJoint, cfg.lambda))));
    } else if (grid_cmd->parsed()) {
      const auto emit = [&](std::string_view model_file, std::string_view grid_file,
                            FigureKind kind) {
        const ProbabilityGrid grid =
            probability_grid(load_model(out, model_file), cfg.sampler.a_range,
                             cfg.sampler.b_range, cfg.grid_resolution);
        out.write(grid_file, grid_to_csv(grid));
        if (cfg.emit_svg) {
          out.write(std::string(figure_stem(kind)) + ".svg", render_svg(kind, std::cref(grid)));
        }
      };
      emit(artifact::kModelA, artifact::kGridA, FigureKind::ProbabilityA);
      emit(artifact::kModelB, artifact::kGridB, FigureKind::ProbabilityB);
      emit(artifact::kModelJoint, artifact::kGridJoint, FigureKind::ProbabilityJoint);
    } else if (rank_cmd->parsed()) {
      out.write(artifact::kSusceptibility, susceptibility_to_csv(rank_targets(load_population(out))));
    } else if (intervene->parsed()) {
      const std::vector<Person> population = load_population(out);
      const auto it = std::find_if(population.begin(), population.end(),
                                   [&](const Person& p) { return p.id == target_id; });
      if (it == population.end()) throw Error("no person with id " + std::to_string(target_id));
      const InterventionResult r =
          apply_intervention(*it, new_b, cfg.sampler.minimizer, cfg.sampler.sigma);
      const std::string doc = dump(to_json(r));
      out.write(artifact::kIntervention, doc);
      std::cout << doc;
      return 0;
    } else if (report_cmd->parsed()) {
      const DbTable joined = import_csv(out.path(artifact::kJoined), kJoinedSchema);
      const FusionReport report =
          fusion_gain(joined, load_model(out, artifact::kModelA), load_model(out, artifact::kModelB),
                      load_model(out, artifact::kModelJoint), rank_targets(load_population(out)));
      out.write(artifact::kFusionReport, dump(to_json(report)));
    }
    print_written(out);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "pipeline error: " << e.what() << "\n";
    return kExitPipeline;
  }
  return 0;
}
