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

#include <string>

#include "json.hpp"

#include "cuspfusion/influence.hpp"
#include "cuspfusion/logistic.hpp"
#include "cuspfusion/metrics.hpp"

namespace cuspfusion {

// JSON documents written by the pipeline. Numbers use nlohmann's shortest
// round-trip formatting, so dumps are byte-stable for identical values.

nlohmann::ordered_json to_json(const FittedModel& model);
/// Throws SchemaError on a malformed document.
FittedModel model_from_json(const nlohmann::json& doc);

/// Flat object: log_loss, auc, accuracy, n, auc_degenerate.
nlohmann::ordered_json to_json(const MetricsReport& report);
nlohmann::ordered_json to_json(const MetricsDelta& delta);
nlohmann::ordered_json to_json(const IndependenceResult& result);
nlohmann::ordered_json to_json(const FusionReport& report);
nlohmann::ordered_json to_json(const InterventionResult& result);

/// Two-space indented dump with a trailing newline.
std::string dump(const nlohmann::ordered_json& doc);

}  // namespace cuspfusion
