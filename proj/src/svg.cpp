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

#include "cuspfusion/svg.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <limits>

#include "cuspfusion/cusp.hpp"
#include "cuspfusion/datastore.hpp"
#include "cuspfusion/error.hpp"

namespace cuspfusion {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 520.0;
constexpr double kLeft = 80.0;
constexpr double kTop = 50.0;
constexpr double kPlotW = 500.0;
constexpr double kPlotH = 400.0;
constexpr int kTicks = 5;

constexpr const char* kColorOne = "#b40426";
constexpr const char* kColorZero = "#3b4cc0";

std::string fixed(double v, int precision = 2) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, precision);
  std::string s(buf, ptr);
  if (s == "-0.00" || s == "-0.0" || s == "-0") s.erase(0, 1);
  return s;
}

struct Range {
  double lo = 0.0;
  double hi = 1.0;
};

// Plot frame mapping horizontal and vertical data ranges to pixels.
struct Frame {
  Range h;
  Range v;

  double px(double x) const { return kLeft + (x - h.lo) / (h.hi - h.lo) * kPlotW; }
  double py(double y) const { return kTop + kPlotH - (y - v.lo) / (v.hi - v.lo) * kPlotH; }
};

Range padded(double lo, double hi) {
  if (hi > lo) return {lo, hi};
  return {lo - 0.5, hi + 0.5};
}

void open_document(std::string& out, std::string_view title) {
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fixed(kWidth, 0) +
         "\" height=\"" + fixed(kHeight, 0) + "\" viewBox=\"0 0 " + fixed(kWidth, 0) + " " +
         fixed(kHeight, 0) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out += "<rect x=\"0\" y=\"0\" width=\"" + fixed(kWidth, 0) + "\" height=\"" +
         fixed(kHeight, 0) + "\" fill=\"white\"/>\n";
  out += "<text x=\"" + fixed(kLeft + kPlotW / 2, 1) + "\" y=\"28\" text-anchor=\"middle\" " +
         "font-size=\"15\">" + std::string(title) + "</text>\n";
}

void draw_axes(std::string& out, const Frame& f, std::string_view h_label, std::string_view v_label) {
  out += "<g class=\"axes\" stroke=\"black\" fill=\"none\">\n";
  out += "<rect x=\"" + fixed(kLeft) + "\" y=\"" + fixed(kTop) + "\" width=\"" + fixed(kPlotW) +
         "\" height=\"" + fixed(kPlotH) + "\"/>\n";
  for (int i = 0; i < kTicks; ++i) {
    const double t = static_cast<double>(i) / (kTicks - 1);
    const double hx = f.px(f.h.lo + t * (f.h.hi - f.h.lo));
    const double vy = f.py(f.v.lo + t * (f.v.hi - f.v.lo));
    out += "<line x1=\"" + fixed(hx) + "\" y1=\"" + fixed(kTop + kPlotH) + "\" x2=\"" + fixed(hx) +
           "\" y2=\"" + fixed(kTop + kPlotH + 6) + "\"/>\n";
    out += "<line x1=\"" + fixed(kLeft - 6) + "\" y1=\"" + fixed(vy) + "\" x2=\"" + fixed(kLeft) +
           "\" y2=\"" + fixed(vy) + "\"/>\n";
  }
  out += "</g>\n<g class=\"tick-labels\" fill=\"black\">\n";
  for (int i = 0; i < kTicks; ++i) {
    const double t = static_cast<double>(i) / (kTicks - 1);
    const double hv = f.h.lo + t * (f.h.hi - f.h.lo);
    const double vv = f.v.lo + t * (f.v.hi - f.v.lo);
    out += "<text x=\"" + fixed(f.px(hv)) + "\" y=\"" + fixed(kTop + kPlotH + 20) +
           "\" text-anchor=\"middle\">" + fixed(hv) + "</text>\n";
    out += "<text x=\"" + fixed(kLeft - 10) + "\" y=\"" + fixed(f.py(vv) + 4) +
           "\" text-anchor=\"end\">" + fixed(vv) + "</text>\n";
  }
  out += "</g>\n";
  out += "<text x=\"" + fixed(kLeft + kPlotW / 2) + "\" y=\"" + fixed(kTop + kPlotH + 42) +
         "\" text-anchor=\"middle\">" + std::string(h_label) + "</text>\n";
  out += "<text x=\"20\" y=\"" + fixed(kTop + kPlotH / 2) + "\" text-anchor=\"middle\" " +
         "transform=\"rotate(-90 20 " + fixed(kTop + kPlotH / 2) + ")\">" + std::string(v_label) +
         "</text>\n";
}

// Blue (p = 0) through light gray (p = 0.5) to red (p = 1).
std::string ramp(double p) {
  constexpr std::array<double, 3> lo{59, 76, 192};
  constexpr std::array<double, 3> mid{240, 240, 240};
  constexpr std::array<double, 3> hi{180, 4, 38};
  p = std::clamp(p, 0.0, 1.0);
  const auto& from = p < 0.5 ? lo : mid;
  const auto& to = p < 0.5 ? mid : hi;
  const double t = p < 0.5 ? p / 0.5 : (p - 0.5) / 0.5;
  std::string out = "rgb(";
  for (int c = 0; c < 3; ++c) {
    if (c) out += ',';
    out += std::to_string(static_cast<int>(std::lround(from[c] + t * (to[c] - from[c]))));
  }
  return out + ")";
}

std::string heatmap(const ProbabilityGrid& grid, std::string_view title) {
  if (grid.points.empty() || grid.resolution < 1 ||
      grid.points.size() != static_cast<std::size_t>(grid.resolution) *
                                static_cast<std::size_t>(grid.resolution)) {
    throw RenderError("heatmap needs a non-empty square grid");
  }
  const int r = grid.resolution;
  const Frame f{padded(grid.at(0, 0).b, grid.at(0, r - 1).b),
                padded(grid.at(0, 0).a, grid.at(r - 1, 0).a)};
  std::string out;
  open_document(out, title);
  const double cw = kPlotW / r;
  const double ch = kPlotH / r;
  out += "<g class=\"heatmap\" shape-rendering=\"crispEdges\">\n";
  for (int ia = 0; ia < r; ++ia) {
    for (int ib = 0; ib < r; ++ib) {
      const GridPoint& pt = grid.at(ia, ib);
      out += "<rect class=\"cell\" x=\"" + fixed(kLeft + ib * cw) + "\" y=\"" +
             fixed(kTop + (r - 1 - ia) * ch) + "\" width=\"" + fixed(cw) + "\" height=\"" +
             fixed(ch) + "\" fill=\"" + ramp(pt.p) + "\"/>\n";
    }
  }
  out += "</g>\n";
  draw_axes(out, f, "B (behavior index)", "A (demographic index)");
  out += "</svg>\n";
  return out;
}

void draw_cusp_curve(std::string& out, const Frame& f) {
  const double b_end = std::min(f.h.hi, fold_boundary_b(std::max(std::abs(f.v.lo), std::abs(f.v.hi))));
  if (!(b_end > 0.0) || f.h.lo > b_end) return;
  const double b_start = std::max(0.0, f.h.lo);
  constexpr int kSamples = 200;
  std::string pts;
  // Upper branch walked inward to the cusp point, then the lower branch outward.
  for (int pass = 0; pass < 2; ++pass) {
    for (int i = 0; i <= kSamples; ++i) {
      const int k = pass == 0 ? kSamples - i : i;
      if (pass == 1 && i == 0) continue;
      const double b = b_start + (b_end - b_start) * k / kSamples;
      const double a = (pass == 0 ? 1.0 : -1.0) * cusp_half_width(b);
      if (a < f.v.lo || a > f.v.hi) continue;
      if (!pts.empty()) pts += ' ';
      pts += fixed(f.px(b)) + "," + fixed(f.py(a));
    }
  }
  out += "<polyline class=\"cusp-curve\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\" points=\"" +
         pts + "\"/>\n";
}

void draw_switching_lines(std::string& out, const Frame& f) {
  const double b_fold = fold_boundary_b(0.5);
  for (const double a : {0.5, -0.5}) {
    const double y_from = f.py(a > 0 ? 0.0 : f.v.lo);
    const double y_to = f.py(a > 0 ? f.v.hi : 0.0);
    out += "<line class=\"switching-line\" data-a=\"" + format_double(a) + "\" data-b=\"" +
           format_double(b_fold) + "\" x1=\"" + fixed(f.px(b_fold)) + "\" y1=\"" + fixed(y_from) +
           "\" x2=\"" + fixed(f.px(b_fold)) + "\" y2=\"" + fixed(y_to) +
           "\" stroke=\"black\" stroke-dasharray=\"6,4\"/>\n";
    out += "<circle class=\"fold-marker\" cx=\"" + fixed(f.px(b_fold)) + "\" cy=\"" +
           fixed(f.py(a)) + "\" r=\"4\" fill=\"none\" stroke=\"black\"/>\n";
  }
}

std::string scatter(FigureKind kind, std::span<const Person> population, std::string_view title) {
  if (population.empty()) throw RenderError("scatter needs a non-empty population");
  const bool latent = kind == FigureKind::LatentBistability;
  double h_lo = std::numeric_limits<double>::infinity(), h_hi = -h_lo;
  double v_lo = h_lo, v_hi = -h_lo;
  for (const Person& p : population) {
    const double v = latent ? p.x : p.a;
    h_lo = std::min(h_lo, p.b);
    h_hi = std::max(h_hi, p.b);
    v_lo = std::min(v_lo, v);
    v_hi = std::max(v_hi, v);
  }
  const Frame f{padded(std::floor(h_lo), std::ceil(h_hi)), padded(std::floor(v_lo), std::ceil(v_hi))};

  std::string out;
  open_document(out, title);
  out += "<g class=\"points\" fill-opacity=\"0.7\">\n";
  for (const Person& p : population) {
    const bool one = latent ? p.a > 0.0 : p.y == 1;
    out += "<circle class=\"pt\" cx=\"" + fixed(f.px(p.b)) + "\" cy=\"" +
           fixed(f.py(latent ? p.x : p.a)) + "\" r=\"2\" fill=\"" +
           (one ? kColorOne : kColorZero) + "\"/>\n";
  }
  out += "</g>\n";
  if (!latent) draw_cusp_curve(out, f);
  if (kind == FigureKind::VotesWithSwitching) draw_switching_lines(out, f);
  draw_axes(out, f, "B (behavior index)", latent ? "X (latent state)" : "A (demographic index)");

  const char* one_label = latent ? "A &gt; 0" : "Y = 1";
  const char* zero_label = latent ? "A &lt;= 0" : "Y = 0";
  const double lx = kLeft + kPlotW + 10;
  out += "<g class=\"legend\">\n";
  out += "<circle cx=\"" + fixed(lx) + "\" cy=\"" + fixed(kTop + 10) + "\" r=\"4\" fill=\"" +
         kColorOne + "\"/>\n<text x=\"" + fixed(lx + 8) + "\" y=\"" + fixed(kTop + 14) + "\">" +
         one_label + "</text>\n";
  out += "<circle cx=\"" + fixed(lx) + "\" cy=\"" + fixed(kTop + 30) + "\" r=\"4\" fill=\"" +
         kColorZero + "\"/>\n<text x=\"" + fixed(lx + 8) + "\" y=\"" + fixed(kTop + 34) + "\">" +
         zero_label + "</text>\n";
  out += "</g>\n</svg>\n";
  return out;
}

std::string_view title_of(FigureKind kind) {
  switch (kind) {
    case FigureKind::ProbabilityA:
      return "P(Y=1 | A) from DB_A";
    case FigureKind::ProbabilityB:
      return "P(Y=1 | B) from DB_B";
    case FigureKind::SampledVotes:
      return "Sampled votes Y over (B, A)";
    case FigureKind::ProbabilityJoint:
      return "P(Y=1 | A, B) from joined DB_A and DB_B";
    case FigureKind::LatentBistability:
      return "Bistability of latent X";
    case FigureKind::VotesWithSwitching:
      return "Sampled votes with switching at |A| = 1/2";
  }
  return "";
}

bool is_heatmap(FigureKind kind) {
  return kind == FigureKind::ProbabilityA || kind == FigureKind::ProbabilityB ||
         kind == FigureKind::ProbabilityJoint;
}

}  // namespace

std::string_view figure_stem(FigureKind kind) {
  switch (kind) {
    case FigureKind::ProbabilityA:
      return "fig1a_prob_a";
    case FigureKind::ProbabilityB:
      return "fig1b_prob_b";
    case FigureKind::SampledVotes:
      return "fig1c_votes";
    case FigureKind::ProbabilityJoint:
      return "fig1d_prob_joint";
    case FigureKind::LatentBistability:
      return "fig2a_latent";
    case FigureKind::VotesWithSwitching:
      return "fig2b_switching";
  }
  return "figure";
}

std::string render_svg(FigureKind kind, const FigureData& data) {
  if (is_heatmap(kind)) {
    const auto* grid = std::get_if<std::reference_wrapper<const ProbabilityGrid>>(&data);
    if (!grid) throw RenderError("heatmap figure needs a probability grid");
    return heatmap(grid->get(), title_of(kind));
  }
  const auto* population = std::get_if<std::span<const Person>>(&data);
  if (!population) throw RenderError("scatter figure needs a population");
  return scatter(kind, *population, title_of(kind));
}

void render_svg(FigureKind kind, const FigureData& data, const std::filesystem::path& path) {
  write_text_file(path, render_svg(kind, data));
}

}  // namespace cuspfusion
