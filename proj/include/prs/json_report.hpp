// Copyright 2026 The PRS Authors
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

#ifndef PRS_JSON_REPORT_HPP_
#define PRS_JSON_REPORT_HPP_

#include "json.hpp"
#include "prs/cregion.hpp"
#include "prs/hpr.hpp"
#include "prs/oracle.hpp"
#include "prs/prs.hpp"

namespace prs {

nlohmann::json to_json(const BilevelPoint& p);
nlohmann::json to_json(const HprResult& r);
nlohmann::json to_json(const CriticalRegion& r);
// Includes every visited region.
nlohmann::json to_json(const PrsResult& r);
nlohmann::json to_json(const GridOracleResult& r);
nlohmann::json to_json(const RegionAtlas& a);
nlohmann::json to_json(const CrossCheckReport& r);

}  // namespace prs

#endif  // PRS_JSON_REPORT_HPP_
