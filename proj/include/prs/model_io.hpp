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

#ifndef PRS_MODEL_IO_HPP_
#define PRS_MODEL_IO_HPP_

#include <filesystem>
#include <string>

#include "json.hpp"
#include "prs/model.hpp"

namespace prs {

inline constexpr int kInstanceSchemaVersion = 1;

// Instance file layout:
//   { "schema_version": 1,
//     "dims":  {"n_xC":..,"n_xI":..,"n_yC":..,"n_yI":..},
//     "upper": {"c1":[..],"d1":[..],"A1":[[..],..],"B1":[[..],..],"b1":[..]},
//     "lower": {"c2":[..],"d2":[..],"A2":[[..],..],"B2":[[..],..],"b2":[..]},
//     "x_integer_indices": [..], "y_integer_indices": [..] }
nlohmann::json instance_to_json(const BilevelInstance& inst);
// Throws kMalformedProblem on a missing key, wrong schema version, ragged
// matrix or failed validation.
BilevelInstance instance_from_json(const nlohmann::json& j);

// Throws kIoError when the file cannot be read or written.
BilevelInstance load_instance(const std::filesystem::path& path);
void save_instance(const BilevelInstance& inst,
                   const std::filesystem::path& path);

nlohmann::json matrix_to_json(const DenseMatrix& m);

}  // namespace prs

#endif  // PRS_MODEL_IO_HPP_
