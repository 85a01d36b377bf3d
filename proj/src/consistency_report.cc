// Copyright 2026 The ejpeg Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ejpeg/consistency_report.h"

#include <cmath>
#include <sstream>

#include "json.hpp"

namespace ejpeg {

const char* ChannelName(ChannelId channel) {
  switch (channel) {
    case ChannelId::kY:
      return "Y";
    case ChannelId::kCb:
      return "Cb";
    case ChannelId::kCr:
      return "Cr";
  }
  return "?";
}

std::string ReportToText(const ConsistencyReport& report) {
  std::ostringstream out;
  out.precision(6);
  out << "mode " << VerifyModeName(report.mode) << "\n";
  for (const ChannelReport& c : report.channels) {
    out << "channel " << ChannelName(c.channel) << " blocks " << c.total_blocks
        << " consistent " << c.consistent_blocks << " violating "
        << c.violating_blocks << " worst " << c.worst_deviation << "\n";
  }
  for (const BlockViolation& v : report.violations) {
    out << "violation " << ChannelName(report.channels[v.plane].channel) << " "
        << v.row << " " << v.col << " " << v.deviation << "\n";
  }
  out << "result " << (report.consistent() ? "consistent" : "inconsistent")
      << "\n";
  return out.str();
}

std::string ReportToJson(const ConsistencyReport& report, int indent) {
  // JSON has no infinity; non-finite deviations are written as null.
  const auto number = [](double v) {
    return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
  };
  nlohmann::json j;
  j["mode"] = VerifyModeName(report.mode);
  j["consistent"] = report.consistent();
  j["total_blocks"] = report.total_blocks();
  j["violating_blocks"] = report.violating_blocks();
  j["worst_deviation"] = number(report.worst_deviation());
  j["channels"] = nlohmann::json::array();
  for (const ChannelReport& c : report.channels) {
    j["channels"].push_back({{"channel", ChannelName(c.channel)},
                             {"total_blocks", c.total_blocks},
                             {"consistent_blocks", c.consistent_blocks},
                             {"violating_blocks", c.violating_blocks},
                             {"worst_deviation", number(c.worst_deviation)}});
  }
  j["violations"] = nlohmann::json::array();
  for (const BlockViolation& v : report.violations) {
    j["violations"].push_back(
        {{"channel", ChannelName(report.channels[v.plane].channel)},
         {"row", v.row},
         {"col", v.col},
         {"deviation", number(v.deviation)}});
  }
  return j.dump(indent);
}

}  // namespace ejpeg
