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

#include "cuspfusion/serialize.hpp"

#include "cuspfusion/error.hpp"

namespace cuspfusion {

using nlohmann::ordered_json;

ordered_json to_json(const FittedModel& model) {
  ordered_json doc;
  doc["inputs"] = to_string(model.spec.inputs);
  doc["degree"] = model.spec.degree;
  doc["terms"] = model.spec.term_names();
  doc["lambda"] = model.lambda;
  doc["mean"] = model.standardization.mean;
  doc["scale"] = model.standardization.scale;
  doc["weights"] = model.weights;
  doc["singular_scale"] = model.singular_scale;
  doc["diagnostics"] = {{"iterations", model.diagnostics.iterations},
                        {"gradient_inf_norm", model.diagnostics.gradient_inf_norm}};
  return doc;
}

FittedModel model_from_json(const nlohmann::json& doc) {
  try {
    FittedModel model;
    model.spec.inputs = input_set_from_string(doc.at("inputs").get<std::string>());
    model.spec.degree = doc.at("degree").get<int>();
    model.lambda = doc.at("lambda").get<double>();
    model.standardization.mean = doc.at("mean").get<std::vector<double>>();
    model.standardization.scale = doc.at("scale").get<std::vector<double>>();
    model.weights = doc.at("weights").get<std::vector<double>>();
    model.singular_scale = doc.value("singular_scale", false);
    if (doc.contains("diagnostics")) {
      model.diagnostics.iterations = doc["diagnostics"].value("iterations", 0);
      model.diagnostics.gradient_inf_norm = doc["diagnostics"].value("gradient_inf_norm", 0.0);
    }
    const std::size_t terms = model.spec.term_count();
    if (model.weights.size() != terms || model.standardization.mean.size() != terms ||
        model.standardization.scale.size() != terms) {
      throw SchemaError("model arrays do not match the feature spec");
    }
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("malformed model document: ") + e.what());
  } catch (const SpecMismatch& e) {
    throw SchemaError(e.what());
  }
}

ordered_json to_json(const MetricsReport& report) {
  return {{"log_loss", report.log_loss},
          {"auc", report.auc},
          {"accuracy", report.accuracy},
          {"n", report.n},
          {"auc_degenerate", report.auc_degenerate}};
}

ordered_json to_json(const MetricsDelta& delta) {
  return {{"log_loss", delta.log_loss}, {"auc", delta.auc}, {"accuracy", delta.accuracy}};
}

ordered_json to_json(const IndependenceResult& result) {
  return {{"statistic", result.statistic},
          {"p_value", result.p_value},
          {"degrees_of_freedom", result.degrees_of_freedom}};
}

ordered_json to_json(const FusionReport& report) {
  ordered_json doc;
  doc["metrics"] = {{"a", to_json(report.model_a)},
                    {"b", to_json(report.model_b)},
                    {"joint", to_json(report.model_joint)}};
  doc["deltas"] = {{"joint_minus_a", to_json(report.joint_minus_a)},
                   {"joint_minus_b", to_json(report.joint_minus_b)},
                   {"a_minus_b", to_json(report.a_minus_b)}};
  doc["independence_b_y"] =
      report.independence ? to_json(*report.independence) : ordered_json(nullptr);
  doc["targets"] = {{"population", report.population},
                    {"metastable_count", report.metastable_count},
                    {"metastable_fraction", report.metastable_fraction}};
  return doc;
}

ordered_json to_json(const InterventionResult& result) {
  return {{"id", result.id},
          {"new_b", result.new_b},
          {"new_x", result.new_x},
          {"new_p", result.new_p},
          {"flipped", result.flipped}};
}

std::string dump(const ordered_json& doc) { return doc.dump(2) + "\n"; }

}  // namespace cuspfusion
