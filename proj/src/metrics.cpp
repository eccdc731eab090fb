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

#include "cuspfusion/metrics.hpp"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numeric>
#include <vector>

#include "cuspfusion/error.hpp"

namespace cuspfusion {

namespace {

void check_lengths(std::span<const double> p, std::span<const int> y) {
  if (p.size() != y.size()) throw DomainError("prediction and label lengths differ");
  if (p.empty()) throw InsufficientData("no samples");
}

}  // namespace

double log_loss(std::span<const double> p, std::span<const int> y) {
  check_lengths(p, y);
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double q = std::clamp(p[i], kLogLossClip, 1.0 - kLogLossClip);
    total -= y[i] == 1 ? std::log(q) : std::log1p(-q);
  }
  return total / static_cast<double>(p.size());
}

std::optional<double> roc_auc(std::span<const double> p, std::span<const int> y) {
  check_lengths(p, y);
  const std::size_t n = p.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return p[i] < p[j]; });

  double positive_rank_sum = 0.0;
  std::size_t positives = 0;
  for (std::size_t start = 0; start < n;) {
    std::size_t end = start;
    while (end < n && p[order[end]] == p[order[start]]) ++end;
    // Ranks start..end-1 (0-based) share their average 1-based rank.
    const double avg_rank = 0.5 * static_cast<double>(start + 1 + end);
    for (std::size_t k = start; k < end; ++k) {
      if (y[order[k]] == 1) {
        positive_rank_sum += avg_rank;
        ++positives;
      }
    }
    start = end;
  }
  const std::size_t negatives = n - positives;
  if (positives == 0 || negatives == 0) return std::nullopt;
  const double np = static_cast<double>(positives);
  return (positive_rank_sum - np * (np + 1.0) / 2.0) / (np * static_cast<double>(negatives));
}

MetricsReport metrics_from_predictions(std::span<const double> p, std::span<const int> y) {
  MetricsReport report;
  report.n = p.size();
  report.log_loss = log_loss(p, y);
  const auto auc = roc_auc(p, y);
  report.auc = auc.value_or(0.5);
  report.auc_degenerate = !auc.has_value();
  std::size_t correct = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if ((p[i] >= 0.5 ? 1 : 0) == y[i]) ++correct;
  }
  report.accuracy = static_cast<double>(correct) / static_cast<double>(p.size());
  return report;
}

MetricsReport evaluate(const FittedModel& model, const DbTable& table) {
  const LabeledData data = labeled_from_table(table);
  const std::vector<double> p = predict_proba(model, data.a, data.b);
  return metrics_from_predictions(p, data.y);
}

IndependenceResult independence_test(std::span<const double> b, std::span<const int> y,
                                     int bins) {
  if (b.size() != y.size()) throw DomainError("b and y lengths differ");
  if (bins < 2) throw DomainError("need at least two bins");
  const std::size_t n = y.size();
  const auto positives = static_cast<std::size_t>(std::count(y.begin(), y.end(), 1));
  if (positives == 0 || positives == n) throw DegenerateLabels("labels contain a single class");
  const auto k = static_cast<std::size_t>(bins);
  if (n / k < 10) {
    throw InsufficientData("independence test needs at least 10 samples per bin");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return b[i] < b[j]; });

  std::vector<double> bin_total(k, 0.0), bin_positive(k, 0.0);
  for (std::size_t rank = 0; rank < n; ++rank) {
    const std::size_t bin = rank * k / n;
    bin_total[bin] += 1.0;
    if (y[order[rank]] == 1) bin_positive[bin] += 1.0;
  }

  const double share = static_cast<double>(positives) / static_cast<double>(n);
  double statistic = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    const double expected_pos = bin_total[j] * share;
    const double expected_neg = bin_total[j] - expected_pos;
    const double observed_neg = bin_total[j] - bin_positive[j];
    statistic += (bin_positive[j] - expected_pos) * (bin_positive[j] - expected_pos) / expected_pos;
    statistic += (observed_neg - expected_neg) * (observed_neg - expected_neg) / expected_neg;
  }

  IndependenceResult result;
  result.statistic = statistic;
  result.degrees_of_freedom = bins - 1;
  result.p_value = boost::math::gamma_q(0.5 * result.degrees_of_freedom, 0.5 * statistic);
  return result;
}

}  // namespace cuspfusion
