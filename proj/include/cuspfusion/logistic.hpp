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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cuspfusion/datastore.hpp"
#include "cuspfusion/sampler.hpp"

namespace cuspfusion {

enum class InputSet { A, B, AB };

std::string to_string(InputSet inputs);
InputSet input_set_from_string(std::string_view s);

/// Polynomial feature layout. Terms are ordered by total degree, and within
/// a degree by descending power of a:
///   {a, b}, degree 3: 1, a, b, a^2, ab, b^2, a^3, a^2 b, a b^2, b^3
///   single z, degree 3: 1, z, z^2, z^3
/// The bias term is always first.
struct FeatureSpec {
  InputSet inputs = InputSet::AB;
  int degree = 3;

  bool uses_a() const noexcept { return inputs != InputSet::B; }
  bool uses_b() const noexcept { return inputs != InputSet::A; }
  std::size_t term_count() const;
  std::vector<std::string> term_names() const;

  bool operator==(const FeatureSpec&) const = default;
};

/// Unstandardized feature vector in term order. Throws SpecMismatch when an
/// input required by the feature spec is missing; unused inputs are ignored.
std::vector<double> expand_features(std::optional<double> a, std::optional<double> b,
                                    const FeatureSpec& spec);

/// Per-term affine map applied before the dot product. The bias entry is
/// mean 0, scale 1.
struct Standardization {
  std::vector<double> mean;
  std::vector<double> scale;

  bool operator==(const Standardization&) const = default;
};

struct FitDiagnostics {
  int iterations = 0;
  double gradient_inf_norm = 0.0;
  std::vector<double> loss_trace;  // objective at w_0 = 0 and after every accepted step
};

struct FittedModel {
  FeatureSpec spec;
  Standardization standardization;
  std::vector<double> weights;  // aligned with spec.term_names()
  double lambda = 1.0;
  bool singular_scale = false;  // some feature had zero variance; its scale was set to 1
  FitDiagnostics diagnostics;
};

/// Training columns; a or b may be empty when the spec does not use them.
struct LabeledData {
  std::vector<double> a;
  std::vector<double> b;
  std::vector<int> y;
};

/// Pulls whichever of a, b exist plus y (required) from a table.
LabeledData labeled_from_table(const DbTable& table);

/// Mean negative log-likelihood plus (lambda / 2n) |w_nonbias|^2 over a
/// column-major standardized design whose first column is the bias.
class PenalizedObjective {
 public:
  PenalizedObjective(std::vector<std::vector<double>> columns, std::vector<double> labels,
                     double lambda);

  std::size_t dimension() const noexcept { return columns_.size(); }
  std::size_t samples() const noexcept { return labels_.size(); }

  double value(std::span<const double> w) const;
  std::vector<double> gradient(std::span<const double> w) const;
  /// Row-major dimension x dimension Hessian.
  std::vector<double> hessian(std::span<const double> w) const;

 private:
  std::vector<double> logits(std::span<const double> w) const;

  std::vector<std::vector<double>> columns_;
  std::vector<double> labels_;
  double lambda_;
};

/// Standardized design columns (bias first) for the given raw inputs.
std::vector<std::vector<double>> design_columns(const LabeledData& data, const FeatureSpec& spec,
                                                const Standardization& standardization);

/// Fits L2-regularized logistic regression by damped Newton from w = 0.
///
/// Throws DegenerateLabels when fewer than two rows or only one class is
/// present, SpecMismatch when a required input column is missing, and
/// ConvergenceFailure if the gradient cannot be driven below 1e-8.
FittedModel fit(const LabeledData& data, const FeatureSpec& spec, double lambda = 1.0);
FittedModel fit(const DbTable& table, const FeatureSpec& spec, double lambda = 1.0);

/// Throws SpecMismatch when a required input is missing.
double predict_proba(const FittedModel& model, std::optional<double> a, std::optional<double> b);

/// Batch prediction over aligned columns (either may be empty if unused).
std::vector<double> predict_proba(const FittedModel& model, std::span<const double> a,
                                  std::span<const double> b);

struct GridPoint {
  double a = 0.0;
  double b = 0.0;
  double p = 0.0;
};

/// resolution x resolution evaluations, row-major with a as the outer axis.
struct ProbabilityGrid {
  int resolution = 0;
  std::vector<GridPoint> points;

  const GridPoint& at(int ia, int ib) const {
    return points[static_cast<std::size_t>(ia) * static_cast<std::size_t>(resolution) +
                  static_cast<std::size_t>(ib)];
  }
};

/// Evenly spaced sweep over a_range x b_range including both endpoints.
/// Throws DomainError when resolution < 2.
ProbabilityGrid probability_grid(const FittedModel& model, Interval a_range, Interval b_range,
                                 int resolution);

/// CSV with header "a,b,p", shortest round-trip numbers.
std::string grid_to_csv(const ProbabilityGrid& grid);

}  // namespace cuspfusion
