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

#include "prs/json_report.hpp"

#include "prs/model_io.hpp"

namespace prs {

using nlohmann::json;

namespace {

template <typename T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

}  // namespace

json to_json(const BilevelPoint& p) {
  return {{"x", p.x}, {"y", p.y}, {"F", p.F}, {"f", p.f}};
}

json to_json(const HprResult& r) {
  json j;
  j["x_hat"] = r.x_hat;
  j["y_hat"] = r.y_hat;
  j["F_hpr"] = r.F_hpr;
  j["y_star"] = optional_json(r.y_star);
  j["F_hprr"] = optional_json(r.F_hprr);
  j["upper_feasible"] = r.upper_feasible;
  return j;
}

json to_json(const CriticalRegion& r) {
  json j;
  j["id"] = r.id;
  j["y_I_fixed"] = r.y_I_fixed;
  j["active_rows"] = r.active_rows;
  j["K_C"] = matrix_to_json(r.K);
  j["h_C"] = r.h;
  j["E"] = matrix_to_json(r.E);
  j["f"] = r.f;
  j["generator_x"] = r.generator_x;
  j["duals"] = r.duals;
  j["strict"] = r.strict;
  j["degenerate"] = r.degenerate;
  return j;
}

json to_json(const PrsResult& r) {
  json j;
  j["best"] = r.best ? to_json(*r.best) : json(nullptr);
  j["iterations"] = r.iterations;
  j["termination"] = std::string(termination_name(r.termination));
  if (!r.failure.empty()) j["failure"] = r.failure;
  json trace = json::array();
  for (const auto& t : r.trace) {
    trace.push_back({{"x", t.x},
                     {"y", t.y},
                     {"F", t.F},
                     {"f", t.f},
                     {"upper_feasible", t.upper_feasible},
                     {"region_id", optional_json(t.region_id)},
                     {"best_F", optional_json(t.best_F)},
                     {"best_f", optional_json(t.best_f)}});
  }
  j["trace"] = std::move(trace);
  json regions = json::array();
  for (const auto& reg : r.visited_regions) regions.push_back(to_json(reg));
  j["visited_regions"] = std::move(regions);
  return j;
}

json to_json(const GridOracleResult& r) {
  json j;
  j["best"] = r.best ? to_json(*r.best) : json(nullptr);
  j["resolution"] = r.resolution;
  j["evaluated"] = r.evaluated;
  j["feasible"] = r.feasible;
  j["box"] = {{"lo", r.box.lo}, {"hi", r.box.hi}};
  return j;
}

json to_json(const RegionAtlas& a) {
  json j;
  j["y_I_fixed"] = a.y_I_fixed;
  json regions = json::array();
  for (const auto& reg : a.regions) regions.push_back(to_json(reg));
  j["regions"] = std::move(regions);
  j["coverage_samples"] = a.coverage_samples;
  j["infeasible_samples"] = a.infeasible_samples;
  j["uncovered"] = a.uncovered;
  return j;
}

json to_json(const CrossCheckReport& r) {
  return {{"prs_feasible", r.prs_feasible},
          {"delta_F", optional_json(r.delta_F)},
          {"within_slack", r.within_slack}};
}

}  // namespace prs
