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

#ifndef EJPEG_CONSISTENCY_REPORT_H_
#define EJPEG_CONSISTENCY_REPORT_H_

#include <string>

#include "ejpeg/consistency.h"

namespace ejpeg {

// Line-oriented form:
//   mode dct-exact
//   channel Y blocks 256 consistent 256 violating 0 worst 0.4999
//   violation Y 3 4 0.81
//   result consistent
std::string ReportToText(const ConsistencyReport& report);

// {"mode", "consistent", "total_blocks", "violating_blocks",
//  "worst_deviation", "channels": [...], "violations": [...]}
std::string ReportToJson(const ConsistencyReport& report, int indent = -1);

const char* ChannelName(ChannelId channel);

}  // namespace ejpeg

#endif  // EJPEG_CONSISTENCY_REPORT_H_
