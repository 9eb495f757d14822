// Copyright 2026 The tsvsim Authors
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

#ifndef TSV_SCENARIO_HPP
#define TSV_SCENARIO_HPP

#include <string>

#include <nlohmann/json_fwd.hpp>

#include "tsv/timeline.hpp"

namespace tsv {

/// Parse a scenario document (see docs/scenario.schema.json). Structural
/// problems throw SchemaError with a message naming the offending event
/// index; the returned timeline still needs validate() before running.
Timeline scenario_from_json(const nlohmann::json& doc);
Timeline scenario_from_string(const std::string& text);
Timeline scenario_from_file(const std::string& path);

/// Serialize back to a scenario document. Named constants come out as
/// explicit amplitude/matrix arrays; numbers round-trip exactly.
nlohmann::json scenario_to_json(const Timeline& t);

/// Result document; `mode` is "exact" or "sampled".
nlohmann::json result_to_json(const RunResult& result, const std::string& mode);

/// CSV with one row per (measurement label, outcome), probabilities at 17
/// significant digits.
std::string result_to_csv(const RunResult& result);

}  // namespace tsv

#endif  // TSV_SCENARIO_HPP
