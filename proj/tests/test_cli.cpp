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

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

#include "cuspfusion/cusp.hpp"
#include "cuspfusion/datastore.hpp"
#include "cuspfusion/error.hpp"
#include "cuspfusion/pipeline.hpp"
#include "cuspfusion/sampler.hpp"
#include "cuspfusion/svg.hpp"

using namespace cuspfusion;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& leaf) {
  const fs::path dir = fs::path(CUSPFUSION_TEST_TMP) / "cli" / leaf;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + CUSPFUSION_CLI + "\" " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::size_t count(const std::string& haystack, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = haystack.find(needle); pos != std::string::npos;
       pos = haystack.find(needle, pos + needle.size()))
    ++n;
  return n;
}

RunConfig quick_config(const fs::path& out) {
  RunConfig cfg;
  cfg.sampler.seed = 42;
  cfg.grid_resolution = 40;
  cfg.output_dir = out;
  return cfg;
}

}  // namespace

TEST_CASE("config parsing") {
  const RunConfig empty = parse_config_text("");
  CHECK(empty.sampler.n == 1000);
  CHECK(empty.sampler.sigma == 10.0);
  CHECK(empty.lambda == 1.0);
  CHECK(empty.grid_resolution == 100);
  CHECK(empty.emit_svg);

  const RunConfig parsed = parse_config_text(
      "# comment\n\nn = 250\nseed=9\nlambda=0.5\nsvg=false\nexact=true\na_min=-0.5\n");
  CHECK(parsed.sampler.n == 250);
  CHECK(parsed.sampler.seed == 9);
  CHECK(parsed.lambda == 0.5);
  CHECK_FALSE(parsed.emit_svg);
  CHECK(parsed.sampler.exact_mode);
  CHECK(parsed.sampler.a_range.lo == -0.5);

  try {
    parse_config(std::nullopt, {{"sigma", "-1"}});
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.key() == "sigma");
  }
  try {
    parse_config_text("colour=blue\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.key() == "colour");
  }
  CHECK_THROWS_AS(parse_config_text("n=ten\n"), ConfigError);
  CHECK_THROWS_AS(parse_config(std::nullopt, {{"resolution", "1"}}), ConfigError);

  const fs::path dir = scratch("config");
  write_text_file(dir / "run.cfg", "seed=7\nn=50\n");
  const RunConfig merged = parse_config(dir / "run.cfg", {{"seed", "42"}});
  CHECK(merged.sampler.seed == 42);
  CHECK(merged.sampler.n == 50);
  CHECK_THROWS_AS(parse_config(dir / "missing.cfg", {}), ConfigError);
}

TEST_CASE("sha256 helper") {
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("pipeline output is complete, hashed and deterministic") {
  const fs::path d1 = scratch("run1"), d2 = scratch("run2");
  const PipelineOutcome o1 = run_pipeline(quick_config(d1));
  const PipelineOutcome o2 = run_pipeline(quick_config(d2));
  REQUIRE(o1.exit_status == 0);
  REQUIRE(o2.exit_status == 0);
  CHECK(o1.manifest.complete);

  std::vector<std::string> expected{
      "population.csv",   "db_a.csv",         "db_b.csv",           "joined.csv",
      "model_a.json",     "model_b.json",     "model_joint.json",   "grid_a.csv",
      "grid_b.csv",       "grid_joint.csv",   "scatter.csv",        "cusp_curve.csv",
      "switching_lines.csv", "susceptibility.csv", "fusion_report.json"};
  for (FigureKind k : {FigureKind::ProbabilityA, FigureKind::ProbabilityB, FigureKind::SampledVotes,
                       FigureKind::ProbabilityJoint, FigureKind::LatentBistability,
                       FigureKind::VotesWithSwitching}) {
    expected.push_back(std::string(figure_stem(k)) + ".svg");
  }
  for (const auto& name : expected) {
    CAPTURE(name);
    const auto it = std::find_if(o1.manifest.files.begin(), o1.manifest.files.end(),
                                 [&](const ManifestEntry& e) { return e.path == name; });
    REQUIRE(it != o1.manifest.files.end());
    const std::string bytes = read_text_file(d1 / name);
    CHECK(it->sha256 == sha256_hex(bytes));
    CHECK(it->bytes == bytes.size());
    CHECK(bytes == read_text_file(d2 / name));
  }
  CHECK(o1.manifest.files.size() == expected.size());

  const auto manifest = nlohmann::json::parse(read_text_file(d1 / "manifest.json"));
  CHECK(manifest["status"] == "complete");
  CHECK(manifest["files"].size() == expected.size());
  CHECK(read_text_file(d1 / "manifest.json") == read_text_file(d2 / "manifest.json"));

  const std::string susceptibility = read_text_file(d1 / "susceptibility.csv");
  CHECK(count(susceptibility, ",metastable,") >= 2);
}

TEST_CASE("switching figure carries the cusp curve and the fold lines") {
  const fs::path dir = scratch("fig2b");
  RunConfig cfg = quick_config(dir);
  REQUIRE(run_pipeline(cfg).exit_status == 0);
  const std::string svg = read_text_file(dir / "fig2b_switching.svg");

  const std::regex poly("<polyline class=\"cusp-curve\"[^>]*points=\"([^\"]*)\"");
  std::smatch m;
  REQUIRE(std::regex_search(svg, m, poly));
  std::istringstream pts(m[1].str());
  std::string token;
  std::size_t n = 0;
  while (pts >> token) {
    const auto comma = token.find(',');
    const double px = std::stod(token.substr(0, comma)), py = std::stod(token.substr(comma + 1));
    // Plot frame is [-2,4] x [-1,1] on a 500 x 400 area at (80, 50).
    const double b = -2.0 + (px - 80.0) / 500.0 * 6.0;
    const double a = 1.0 - (py - 50.0) / 400.0 * 2.0;
    CHECK(std::abs(std::abs(a) - cusp_half_width(b)) <= 2e-4);
    ++n;
  }
  CHECK(n > 100);

  CHECK(count(svg, "class=\"switching-line\"") == 2);
  CHECK(count(svg, "data-b=\"1.1905507889761495\"") == 2);
  CHECK(count(svg, "stroke-dasharray") >= 2);

  const std::string fold_csv = read_text_file(dir / "switching_lines.csv");
  CHECK(fold_csv == "a,b\n0.5,1.1905507889761495\n-0.5,1.1905507889761495\n");
  const std::string curve = read_text_file(dir / "cusp_curve.csv");
  REQUIRE(curve.rfind("b,a\n", 0) == 0);
  std::istringstream lines(curve.substr(4));
  std::string line;
  std::size_t rows = 0;
  while (std::getline(lines, line)) {
    const auto comma = line.find(',');
    const double b = std::stod(line.substr(0, comma)), a = std::stod(line.substr(comma + 1));
    CHECK(std::abs(std::abs(a) - cusp_half_width(b)) <= 1e-15);
    ++rows;
  }
  CHECK(rows > 100);
}

TEST_CASE("render_svg element counts") {
  ProbabilityGrid empty;
  CHECK_THROWS_AS(render_svg(FigureKind::ProbabilityJoint, std::cref(empty)), RenderError);
  CHECK_THROWS_AS(render_svg(FigureKind::SampledVotes, std::span<const Person>{}), RenderError);

  ProbabilityGrid g{2, {{0, 0, 0.1}, {0, 1, 0.4}, {1, 0, 0.6}, {1, 1, 0.9}}};
  const std::string heat = render_svg(FigureKind::ProbabilityJoint, std::cref(g));
  CHECK(count(heat, "class=\"cell\"") == 4);
  CHECK(heat.rfind("<svg", 0) == 0);
  CHECK(heat.find("<line") != std::string::npos);

  SamplerConfig scfg;
  scfg.seed = 3;
  const auto pop = sample_population(scfg);
  for (FigureKind k : {FigureKind::SampledVotes, FigureKind::LatentBistability,
                       FigureKind::VotesWithSwitching}) {
    const std::string s = render_svg(k, std::span<const Person>(pop));
    CHECK(count(s, "class=\"pt\"") == pop.size());
    CHECK(s.find("xlink:href") == std::string::npos);
  }
  CHECK(render_svg(FigureKind::SampledVotes, std::span<const Person>(pop)).find("cusp-curve") !=
        std::string::npos);
}

TEST_CASE("command-line binary") {
  const fs::path dir = scratch("binary");
  const std::string out = "--out \"" + dir.string() + "\" --seed 42 --no-svg --resolution 20";

  CHECK(run_cli("--sigma -1 " + out + " all") == 2);
  CHECK(run_cli(out + " bogus") == 2);
  CHECK(run_cli(out) == 2);
  CHECK(run_cli("--config \"" + (dir / "missing.cfg").string() + "\" all") == 2);

  for (const char* step : {"generate", "split", "join", "fit", "grid", "rank", "report"}) {
    CAPTURE(step);
    CHECK(run_cli(out + " " + step) == 0);
  }
  CHECK(run_cli(out + " intervene --id 0 --new-b 1.0") == 0);
  CHECK(fs::exists(dir / "intervention.json"));
  CHECK(run_cli(out + " intervene --id 999999 --new-b 1.0") == 3);

  const fs::path whole = scratch("binary_all");
  CHECK(run_cli("--out \"" + whole.string() + "\" --seed 42 --no-svg --resolution 20 all") == 0);
  for (const char* f : {"population.csv", "joined.csv", "model_joint.json", "grid_joint.csv",
                        "susceptibility.csv", "fusion_report.json"}) {
    CAPTURE(f);
    CHECK(read_text_file(dir / f) == read_text_file(whole / f));
  }
  CHECK_FALSE(fs::exists(whole / "fig2b_switching.svg"));
}

TEST_CASE("pipeline failure leaves a partial manifest") {
  const fs::path dir = scratch("partial");
  write_text_file(dir / "bad.cfg", "nm_max_iterations=1\n");
  CHECK(run_cli("--config \"" + (dir / "bad.cfg").string() + "\" --out \"" + dir.string() +
                "\" all") == 3);
  const auto manifest = nlohmann::json::parse(read_text_file(dir / "manifest.json"));
  CHECK(manifest["status"] == "partial");
  CHECK(manifest.contains("error"));
}
