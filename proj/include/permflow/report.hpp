// Copyright 2026 The permflow Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PERMFLOW_REPORT_HPP_
#define PERMFLOW_REPORT_HPP_

#include <json.hpp>
#include <string>

namespace permflow {

// Experiment report with the fixed schema: experiment, params, results,
// residuals, runtime_ms, version, plus the volatile timestamp field that
// byte-level comparisons are expected to ignore.
nlohmann::json make_report(const std::string& experiment, nlohmann::json params,
                           nlohmann::json results, nlohmann::json residuals,
                           double runtime_ms);

// Serializes with every floating-point number at 17 significant digits, so
// reports round-trip losslessly and diff cleanly. Keys come out in sorted
// order; output ends with a newline.
std::string dump_report(const nlohmann::json& j);

}  // namespace permflow

#endif  // PERMFLOW_REPORT_HPP_
