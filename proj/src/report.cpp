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

#include "permflow/report.hpp"

#include <chrono>
#include <cmath>
#include <ctime>

#include "permflow/numerics.hpp"
#include "permflow/version.hpp"

namespace permflow {

namespace {

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void dump_value(const nlohmann::json& j, std::string& out, int depth) {
  const std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
  const std::string inner_pad(static_cast<std::size_t>(depth + 1) * 2, ' ');
  switch (j.type()) {
    case nlohmann::json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out += ",\n";
        first = false;
        out += inner_pad + nlohmann::json(key).dump() + ": ";
        dump_value(value, out, depth + 1);
      }
      out += "\n" + pad + "}";
      return;
    }
    case nlohmann::json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i > 0) out += ",\n";
        out += inner_pad;
        dump_value(j[i], out, depth + 1);
      }
      out += "\n" + pad + "]";
      return;
    }
    case nlohmann::json::value_t::number_float: {
      const double x = j.get<double>();
      out += std::isfinite(x) ? format_g17(x) : "null";
      return;
    }
    default:
      out += j.dump();
      return;
  }
}

}  // namespace

nlohmann::json make_report(const std::string& experiment, nlohmann::json params,
                           nlohmann::json results, nlohmann::json residuals,
                           double runtime_ms) {
  nlohmann::json report;
  report["experiment"] = experiment;
  report["params"] = std::move(params);
  report["results"] = std::move(results);
  report["residuals"] = std::move(residuals);
  report["runtime_ms"] = runtime_ms;
  report["version"] = kVersion;
  report["timestamp"] = utc_timestamp();
  return report;
}

std::string dump_report(const nlohmann::json& j) {
  std::string out;
  dump_value(j, out, 0);
  out += '\n';
  return out;
}

}  // namespace permflow
