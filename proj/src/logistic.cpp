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

#include "cuspfusion/logistic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include "cuspfusion/error.hpp"
#include "cuspfusion/kernels.hpp"

namespace cuspfusion {

namespace {

constexpr double kGradientTarget = 1e-10;
constexpr double kGradientRequired = 1e-8;
constexpr double kArmijo = 1e-4;
constexpr int kMaxNewtonIterations = 100;

using Exponents = std::pair<int, int>;  // powers of a and b

std::vector<Exponents> term_exponents(const FeatureSpec& spec) {
  if (spec.degree < 1) throw SpecMismatch("feature degree must be >= 1");
  std::vector<Exponents> out;
  for (int k = 0; k <= spec.degree; ++k) {
    switch (spec.inputs) {
      case InputSet::A:
        out.emplace_back(k, 0);
        break;
      case InputSet::B:
        out.emplace_back(0, k);
        break;
      case InputSet::AB:
        for (int i = k; i >= 0; --i) out.emplace_back(i, k - i);
        break;
    }
  }
  return out;
}

double ipow(double v, int e) {
  double out = 1.0;
  for (int i = 0; i < e; ++i) out *= v;
  return out;
}

std::string monomial_name(const char* var, int power) {
  if (power == 0) return {};
  if (power == 1) return var;
  return std::string(var) + "^" + std::to_string(power);
}

double softplus(double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))); }

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double inf_norm(std::span<const double> v) {
  double out = 0.0;
  for (double x : v) out = std::max(out, std::abs(x));
  return out;
}

// Solves H x = rhs for symmetric positive definite H (row-major) by
// Cholesky. Adds diagonal jitter if the factorization breaks down.
std::vector<double> solve_spd(std::vector<double> h, std::vector<double> rhs, std::size_t d) {
  double jitter = 0.0;
  for (int attempt = 0; attempt < 20; ++attempt) {
    std::vector<double> l(d * d, 0.0);
    bool ok = true;
    for (std::size_t j = 0; j < d && ok; ++j) {
      double diag = h[j * d + j] + jitter;
      for (std::size_t k = 0; k < j; ++k) diag -= l[j * d + k] * l[j * d + k];
      if (!(diag > 0.0)) {
        ok = false;
        break;
      }
      l[j * d + j] = std::sqrt(diag);
      for (std::size_t i = j + 1; i < d; ++i) {
        double s = h[i * d + j];
        for (std::size_t k = 0; k < j; ++k) s -= l[i * d + k] * l[j * d + k];
        l[i * d + j] = s / l[j * d + j];
      }
    }
    if (ok) {
      for (std::size_t i = 0; i < d; ++i) {
        double s = rhs[i];
        for (std::size_t k = 0; k < i; ++k) s -= l[i * d + k] * rhs[k];
        rhs[i] = s / l[i * d + i];
      }
      for (std::size_t i = d; i-- > 0;) {
        double s = rhs[i];
        for (std::size_t k = i + 1; k < d; ++k) s -= l[k * d + i] * rhs[k];
        rhs[i] = s / l[i * d + i];
      }
      return rhs;
    }
    jitter = jitter == 0.0 ? 1e-12 : jitter * 10.0;
  }
  throw ConvergenceFailure("Newton system is not positive definite");
}

Standardization standardize(const LabeledData& data, const std::vector<Exponents>& terms,
                            bool& singular) {
  const std::size_t n = data.y.size();
  Standardization st;
  st.mean.assign(terms.size(), 0.0);
  st.scale.assign(terms.size(), 1.0);
  singular = false;
  std::vector<double> raw(n);
  for (std::size_t j = 1; j < terms.size(); ++j) {
    const auto [pa, pb] = terms[j];
    for (std::size_t i = 0; i < n; ++i) {
      raw[i] = (pa ? ipow(data.a[i], pa) : 1.0) * (pb ? ipow(data.b[i], pb) : 1.0);
    }
    const auto [lo, hi] = std::minmax_element(raw.begin(), raw.end());
    if (*lo == *hi) {
      st.mean[j] = *lo;
      singular = true;
      continue;
    }
    const double mean = std::accumulate(raw.begin(), raw.end(), 0.0) / static_cast<double>(n);
    double var = 0.0;
    for (double v : raw) var += (v - mean) * (v - mean);
    var /= static_cast<double>(n);
    st.mean[j] = mean;
    const double sd = std::sqrt(var);
    if (sd <= 1e-12 * std::max(1.0, std::abs(mean))) {
      singular = true;
    } else {
      st.scale[j] = sd;
    }
  }
  return st;
}

void require_inputs(const LabeledData& data, const FeatureSpec& spec) {
  const std::size_t n = data.y.size();
  if (spec.uses_a() && data.a.size() != n) throw SpecMismatch("model needs input 'a'");
  if (spec.uses_b() && data.b.size() != n) throw SpecMismatch("model needs input 'b'");
}

}  // namespace

std::string to_string(InputSet inputs) {
  switch (inputs) {
    case InputSet::A:
      return "a";
    case InputSet::B:
      return "b";
    case InputSet::AB:
      return "ab";
  }
  return "?";
}

InputSet input_set_from_string(std::string_view s) {
  if (s == "a") return InputSet::A;
  if (s == "b") return InputSet::B;
  if (s == "ab") return InputSet::AB;
  throw SpecMismatch("unknown input set '" + std::string(s) + "'");
}

std::size_t FeatureSpec::term_count() const { return term_exponents(*this).size(); }

std::vector<std::string> FeatureSpec::term_names() const {
  std::vector<std::string> out;
  for (const auto& [pa, pb] : term_exponents(*this)) {
    const std::string na = monomial_name("a", pa);
    const std::string nb = monomial_name("b", pb);
    if (na.empty() && nb.empty()) {
      out.emplace_back("1");
    } else if (na.empty() || nb.empty()) {
      out.push_back(na + nb);
    } else {
      out.push_back(na + "*" + nb);
    }
  }
  return out;
}

std::vector<double> expand_features(std::optional<double> a, std::optional<double> b,
                                    const FeatureSpec& spec) {
  if (spec.uses_a() && !a) throw SpecMismatch("model needs input 'a'");
  if (spec.uses_b() && !b) throw SpecMismatch("model needs input 'b'");
  std::vector<double> out;
  for (const auto& [pa, pb] : term_exponents(spec)) {
    out.push_back((pa ? ipow(*a, pa) : 1.0) * (pb ? ipow(*b, pb) : 1.0));
  }
  return out;
}

LabeledData labeled_from_table(const DbTable& table) {
  LabeledData data;
  if (!table.has_column("y")) throw SchemaError("table '" + table.name() + "' has no 'y' column");
  if (table.has_column("a")) data.a = table.column("a");
  if (table.has_column("b")) data.b = table.column("b");
  for (double v : table.column("y")) {
    if (v != 0.0 && v != 1.0) throw SchemaError("labels must be 0 or 1");
    data.y.push_back(static_cast<int>(v));
  }
  return data;
}

PenalizedObjective::PenalizedObjective(std::vector<std::vector<double>> columns,
                                       std::vector<double> labels, double lambda)
    : columns_(std::move(columns)), labels_(std::move(labels)), lambda_(lambda) {
  for (const auto& c : columns_) {
    if (c.size() != labels_.size()) throw SpecMismatch("design column length mismatch");
  }
}

std::vector<double> PenalizedObjective::logits(std::span<const double> w) const {
  std::vector<double> z(labels_.size(), 0.0);
  for (std::size_t j = 0; j < columns_.size(); ++j) kernels::axpy(w[j], columns_[j], z);
  return z;
}

double PenalizedObjective::value(std::span<const double> w) const {
  const std::vector<double> z = logits(w);
  double nll = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) nll += softplus(z[i]) - labels_[i] * z[i];
  const double n = static_cast<double>(labels_.size());
  double penalty = 0.0;
  for (std::size_t j = 1; j < w.size(); ++j) penalty += w[j] * w[j];
  return nll / n + lambda_ / (2.0 * n) * penalty;
}

std::vector<double> PenalizedObjective::gradient(std::span<const double> w) const {
  std::vector<double> r = logits(w);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = sigmoid(r[i]) - labels_[i];
  const double n = static_cast<double>(labels_.size());
  std::vector<double> g(columns_.size());
  for (std::size_t j = 0; j < columns_.size(); ++j) {
    g[j] = kernels::dot(columns_[j], r) / n;
    if (j > 0) g[j] += lambda_ / n * w[j];
  }
  return g;
}

std::vector<double> PenalizedObjective::hessian(std::span<const double> w) const {
  std::vector<double> s = logits(w);
  for (double& v : s) {
    const double p = sigmoid(v);
    v = p * (1.0 - p);
  }
  const std::size_t d = columns_.size();
  const double n = static_cast<double>(labels_.size());
  std::vector<double> h(d * d);
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t k = 0; k <= j; ++k) {
      const double v = kernels::weighted_dot(columns_[j], columns_[k], s) / n;
      h[j * d + k] = v;
      h[k * d + j] = v;
    }
    if (j > 0) h[j * d + j] += lambda_ / n;
  }
  return h;
}

std::vector<std::vector<double>> design_columns(const LabeledData& data, const FeatureSpec& spec,
                                                const Standardization& standardization) {
  require_inputs(data, spec);
  const auto terms = term_exponents(spec);
  const std::size_t n = data.y.size();
  std::vector<std::vector<double>> cols(terms.size(), std::vector<double>(n));
  for (std::size_t j = 0; j < terms.size(); ++j) {
    const auto [pa, pb] = terms[j];
    for (std::size_t i = 0; i < n; ++i) {
      const double raw = (pa ? ipow(data.a[i], pa) : 1.0) * (pb ? ipow(data.b[i], pb) : 1.0);
      cols[j][i] = j == 0 ? 1.0 : (raw - standardization.mean[j]) / standardization.scale[j];
    }
  }
  return cols;
}

FittedModel fit(const LabeledData& data, const FeatureSpec& spec, double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw DomainError("lambda must be >= 0");
  const std::size_t n = data.y.size();
  if (n < 2) throw DegenerateLabels("need at least two rows to fit");
  const auto positives = std::count(data.y.begin(), data.y.end(), 1);
  if (positives == 0 || static_cast<std::size_t>(positives) == n) {
    throw DegenerateLabels("labels contain a single class");
  }
  require_inputs(data, spec);

  FittedModel model;
  model.spec = spec;
  model.lambda = lambda;
  const auto terms = term_exponents(spec);
  model.standardization = standardize(data, terms, model.singular_scale);

  const PenalizedObjective objective(design_columns(data, spec, model.standardization),
                                     std::vector<double>(data.y.begin(), data.y.end()), lambda);
  const std::size_t d = objective.dimension();
  std::vector<double> w(d, 0.0);
  double loss = objective.value(w);
  auto& diag = model.diagnostics;
  diag.loss_trace.push_back(loss);

  std::vector<double> g = objective.gradient(w);
  while (inf_norm(g) > kGradientTarget && diag.iterations < kMaxNewtonIterations) {
    std::vector<double> neg_g(d);
    for (std::size_t j = 0; j < d; ++j) neg_g[j] = -g[j];
    const std::vector<double> step = solve_spd(objective.hessian(w), neg_g, d);
    const double slope = std::inner_product(g.begin(), g.end(), step.begin(), 0.0);

    double t = 1.0;
    std::vector<double> trial(d);
    bool accepted = false;
    for (int halvings = 0; halvings < 60; ++halvings, t *= 0.5) {
      for (std::size_t j = 0; j < d; ++j) trial[j] = w[j] + t * step[j];
      const double trial_loss = objective.value(trial);
      if (trial_loss <= loss + kArmijo * t * slope) {
        w = trial;
        loss = trial_loss;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;  // at the floating-point floor of the objective
    ++diag.iterations;
    diag.loss_trace.push_back(loss);
    g = objective.gradient(w);
  }

  diag.gradient_inf_norm = inf_norm(g);
  if (diag.gradient_inf_norm > kGradientRequired) {
    throw ConvergenceFailure("logistic fit stalled with gradient norm " +
                             std::to_string(diag.gradient_inf_norm));
  }
  model.weights = std::move(w);
  return model;
}

FittedModel fit(const DbTable& table, const FeatureSpec& spec, double lambda) {
  return fit(labeled_from_table(table), spec, lambda);
}

double predict_proba(const FittedModel& model, std::optional<double> a, std::optional<double> b) {
  const std::vector<double> f = expand_features(a, b, model.spec);
  if (f.size() != model.weights.size()) throw SpecMismatch("weights do not match feature spec");
  double z = model.weights[0];
  for (std::size_t j = 1; j < f.size(); ++j) {
    z += model.weights[j] * (f[j] - model.standardization.mean[j]) / model.standardization.scale[j];
  }
  return sigmoid(z);
}

std::vector<double> predict_proba(const FittedModel& model, std::span<const double> a,
                                  std::span<const double> b) {
  const std::size_t n = model.spec.uses_a() ? a.size() : b.size();
  if (model.spec.uses_a() && a.size() != n) throw SpecMismatch("model needs input 'a'");
  if (model.spec.uses_b() && b.size() != n) throw SpecMismatch("model needs input 'b'");
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::optional<double> ai = model.spec.uses_a() ? std::optional(a[i]) : std::nullopt;
    const std::optional<double> bi = model.spec.uses_b() ? std::optional(b[i]) : std::nullopt;
    out[i] = predict_proba(model, ai, bi);
  }
  return out;
}

ProbabilityGrid probability_grid(const FittedModel& model, Interval a_range, Interval b_range,
                                 int resolution) {
  if (resolution < 2) throw DomainError("grid resolution must be >= 2");
  const auto axis = [resolution](Interval r, int i) {
    if (i == resolution - 1) return r.hi;
    return r.lo + (r.hi - r.lo) * static_cast<double>(i) / static_cast<double>(resolution - 1);
  };
  ProbabilityGrid grid;
  grid.resolution = resolution;
  grid.points.reserve(static_cast<std::size_t>(resolution) * static_cast<std::size_t>(resolution));
  for (int ia = 0; ia < resolution; ++ia) {
    const double a = axis(a_range, ia);
    for (int ib = 0; ib < resolution; ++ib) {
      const double b = axis(b_range, ib);
      grid.points.push_back({a, b, predict_proba(model, a, b)});
    }
  }
  return grid;
}

std::string grid_to_csv(const ProbabilityGrid& grid) {
  std::string out = "a,b,p\n";
  for (const GridPoint& pt : grid.points) {
    out += format_double(pt.a);
    out += ',';
    out += format_double(pt.b);
    out += ',';
    out += format_double(pt.p);
    out += '\n';
  }
  return out;
}

}  // namespace cuspfusion
