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

#include "cuspfusion/datastore.hpp"
#include "cuspfusion/logistic.hpp"

namespace cuspfusion {

/// Probability clipping used inside the log-loss only.
inline constexpr double kLogLossClip = 1e-12;

struct MetricsReport {
  double log_loss = 0.0;
  double auc = 0.5;
  double accuracy = 0.0;  // threshold: predict 1 iff p >= 0.5
  std::size_t n = 0;
  bool auc_degenerate = false;  // single-class labels; auc reported as 0.5
};

double log_loss(std::span<const double> p, std::span<const int> y);

/// Rank-based (Mann-Whitney) AUC with tied scores given their average rank.
/// nullopt when only one class is present.
std::optional<double> roc_auc(std::span<const double> p, std::span<const int> y);

MetricsReport metrics_from_predictions(std::span<const double> p, std::span<const int> y);

/// Scores a fitted model on a table holding its inputs and y.
MetricsReport evaluate(const FittedModel& model, const DbTable& table);

struct IndependenceResult {
  double statistic = 0.0;
  double p_value = 1.0;
  int degrees_of_freedom = 0;
};

/// Pearson chi-square test of y against equal-count quantile bins of b
/// (deciles by default, 9 degrees of freedom). Throws DegenerateLabels for
/// constant y and InsufficientData when a bin would hold fewer than 10 rows.
IndependenceResult independence_test(std::span<const double> b, std::span<const int> y,
                                     int bins = 10);

}  // namespace cuspfusion
