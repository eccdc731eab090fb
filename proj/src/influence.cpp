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

#include "cuspfusion/influence.hpp"

#include <algorithm>
#include <cmath>

#include "cuspfusion/error.hpp"

namespace cuspfusion {

namespace {

SusceptibilityRecord classify(const Person& person) {
  SusceptibilityRecord rec;
  rec.id = person.id;
  const CuspParams params{person.a, person.b};
  switch (is_bistable(params)) {
    case Stability::Degenerate:
      throw DegenerateParameters("person " + std::to_string(person.id) +
                                 " sits on the cusp curve");
    case Stability::Monostable:
      return rec;
    case Stability::Bistable:
      break;
  }
  if (person.a == 0.0) return rec;
  if ((person.x > 0.0) == (person.a > 0.0)) {
    rec.branch = Branch::Aligned;
    return rec;
  }
  rec.branch = Branch::Metastable;
  rec.delta_b_flip = person.b - fold_boundary_b(person.a);
  rec.flip_direction = person.a > 0.0 ? FlipDirection::ToOne : FlipDirection::ToZero;
  return rec;
}

}  // namespace

std::string_view to_string(Branch b) {
  switch (b) {
    case Branch::Aligned:
      return "aligned";
    case Branch::Metastable:
      return "metastable";
    case Branch::MonostableNeutral:
      return "monostable_neutral";
  }
  return "?";
}

std::string_view to_string(FlipDirection d) {
  return d == FlipDirection::ToOne ? "to_1" : "to_0";
}

SusceptibilityRecord susceptibility(const Person& person) { return classify(person); }

std::vector<SusceptibilityRecord> rank_targets(std::span<const Person> population) {
  std::vector<SusceptibilityRecord> records;
  records.reserve(population.size());
  for (const Person& person : population) {
    try {
      records.push_back(classify(person));
    } catch (const DegenerateParameters&) {
      SusceptibilityRecord rec;
      rec.id = person.id;
      rec.on_degenerate = true;
      records.push_back(rec);
    }
  }
  std::stable_sort(records.begin(), records.end(),
                   [](const SusceptibilityRecord& l, const SusceptibilityRecord& r) {
                     const bool lm = l.branch == Branch::Metastable;
                     const bool rm = r.branch == Branch::Metastable;
                     if (lm != rm) return lm;
                     if (lm && *l.delta_b_flip != *r.delta_b_flip) {
                       return *l.delta_b_flip < *r.delta_b_flip;
                     }
                     return l.id < r.id;
                   });
  return records;
}

InterventionResult apply_intervention(const Person& person, double new_b,
                                      const MinimizerConfig& cfg, double sigma) {
  if (!std::isfinite(new_b)) throw DomainError("new_b must be finite");
  InterventionResult out;
  out.id = person.id;
  out.new_b = new_b;
  out.new_x = local_minimum_from(person.x, {person.a, new_b}, cfg);
  out.new_p = vote_probability(out.new_x, sigma);
  out.flipped = person.x != 0.0 && out.new_x != 0.0 && ((out.new_x > 0.0) != (person.x > 0.0));
  return out;
}

std::vector<double> hysteresis_path(const Person& person, std::span<const double> b_values,
                                    const MinimizerConfig& cfg) {
  std::vector<double> path;
  path.reserve(b_values.size());
  double x = person.x;
  for (double b : b_values) {
    x = local_minimum_from(x, {person.a, b}, cfg);
    path.push_back(x);
  }
  return path;
}

std::string susceptibility_to_csv(std::span<const SusceptibilityRecord> records) {
  std::string out = "id,branch,delta_b_flip,flip_direction\n";
  for (const SusceptibilityRecord& r : records) {
    out += std::to_string(r.id);
    out += ',';
    out += to_string(r.branch);
    out += ',';
    if (r.delta_b_flip) out += format_double(*r.delta_b_flip);
    out += ',';
    if (r.flip_direction) out += to_string(*r.flip_direction);
    out += '\n';
  }
  return out;
}

MetricsDelta operator-(const MetricsReport& lhs, const MetricsReport& rhs) {
  return {lhs.log_loss - rhs.log_loss, lhs.auc - rhs.auc, lhs.accuracy - rhs.accuracy};
}

FusionReport fusion_gain(const DbTable& joined, const FittedModel& model_a,
                         const FittedModel& model_b, const FittedModel& model_joint,
                         std::span<const SusceptibilityRecord> targets) {
  FusionReport report;
  report.model_a = evaluate(model_a, joined);
  report.model_b = evaluate(model_b, joined);
  report.model_joint = evaluate(model_joint, joined);
  report.joint_minus_a = report.model_joint - report.model_a;
  report.joint_minus_b = report.model_joint - report.model_b;
  report.a_minus_b = report.model_a - report.model_b;

  const LabeledData data = labeled_from_table(joined);
  try {
    report.independence = independence_test(data.b, data.y);
  } catch (const InsufficientData&) {
  } catch (const DegenerateLabels&) {
  }

  report.population = targets.size();
  report.metastable_count = static_cast<std::size_t>(
      std::count_if(targets.begin(), targets.end(),
                    [](const SusceptibilityRecord& r) { return r.branch == Branch::Metastable; }));
  report.metastable_fraction =
      targets.empty() ? 0.0
                      : static_cast<double>(report.metastable_count) /
                            static_cast<double>(targets.size());
  return report;
}

}  // namespace cuspfusion
