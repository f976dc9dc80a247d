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

#include "prs/model_io.hpp"

#include <fstream>
#include <sstream>

#include "prs/errors.hpp"

namespace prs {
namespace {

using nlohmann::json;

const json& require(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw Error(ErrorCode::kMalformedProblem,
                std::string("instance JSON: missing key '") + key + "'");
  }
  return j.at(key);
}

Vector read_vector(const json& j, const char* key) {
  const json& v = require(j, key);
  if (!v.is_array()) {
    throw Error(ErrorCode::kMalformedProblem,
                std::string("instance JSON: '") + key + "' is not an array");
  }
  Vector out;
  out.reserve(v.size());
  for (const auto& e : v) {
    if (!e.is_number()) {
      throw Error(ErrorCode::kMalformedProblem,
                  std::string("instance JSON: '") + key + "' has a non-number");
    }
    out.push_back(e.get<double>());
  }
  return out;
}

DenseMatrix read_matrix(const json& j, const char* key, std::size_t cols) {
  const json& v = require(j, key);
  if (!v.is_array()) {
    throw Error(ErrorCode::kMalformedProblem,
                std::string("instance JSON: '") + key + "' is not an array");
  }
  std::vector<std::vector<double>> rows;
  for (const auto& r : v) {
    if (!r.is_array()) {
      throw Error(ErrorCode::kMalformedProblem,
                  std::string("instance JSON: '") + key + "' row is not an array");
    }
    std::vector<double> row;
    for (const auto& e : r) {
      if (!e.is_number()) {
        throw Error(ErrorCode::kMalformedProblem,
                    std::string("instance JSON: '") + key +
                        "' has a non-number");
      }
      row.push_back(e.get<double>());
    }
    rows.push_back(std::move(row));
  }
  return DenseMatrix::from_rows(rows, cols);
}

std::vector<std::size_t> read_indices(const json& j, const char* key) {
  const json& v = require(j, key);
  std::vector<std::size_t> out;
  for (const auto& e : v) {
    if (!e.is_number_unsigned() && !(e.is_number_integer() && e.get<long>() >= 0)) {
      throw Error(ErrorCode::kMalformedProblem,
                  std::string("instance JSON: '") + key +
                      "' must hold non-negative integers");
    }
    out.push_back(e.get<std::size_t>());
  }
  return out;
}

}  // namespace

json matrix_to_json(const DenseMatrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (double v : m.row(r)) row.push_back(v);
    rows.push_back(std::move(row));
  }
  return rows;
}

json instance_to_json(const BilevelInstance& inst) {
  json j;
  j["schema_version"] = kInstanceSchemaVersion;
  j["dims"] = {{"n_xC", inst.n_xC},
               {"n_xI", inst.n_xI},
               {"n_yC", inst.n_yC},
               {"n_yI", inst.n_yI}};
  j["upper"] = {{"c1", inst.c1},
                {"d1", inst.d1},
                {"A1", matrix_to_json(inst.A1)},
                {"B1", matrix_to_json(inst.B1)},
                {"b1", inst.b1}};
  j["lower"] = {{"c2", inst.c2},
                {"d2", inst.d2},
                {"A2", matrix_to_json(inst.A2)},
                {"B2", matrix_to_json(inst.B2)},
                {"b2", inst.b2}};
  j["x_integer_indices"] = inst.x_integer_indices;
  j["y_integer_indices"] = inst.y_integer_indices;
  return j;
}

BilevelInstance instance_from_json(const json& j) {
  const json& ver = require(j, "schema_version");
  if (!ver.is_number_integer() || ver.get<int>() != kInstanceSchemaVersion) {
    throw Error(ErrorCode::kMalformedProblem,
                "instance JSON: unsupported schema_version");
  }
  BilevelInstance inst;
  const json& dims = require(j, "dims");
  inst.n_xC = require(dims, "n_xC").get<std::size_t>();
  inst.n_xI = require(dims, "n_xI").get<std::size_t>();
  inst.n_yC = require(dims, "n_yC").get<std::size_t>();
  inst.n_yI = require(dims, "n_yI").get<std::size_t>();
  const json& up = require(j, "upper");
  const json& lo = require(j, "lower");
  inst.c1 = read_vector(up, "c1");
  inst.d1 = read_vector(up, "d1");
  inst.A1 = read_matrix(up, "A1", inst.n_x());
  inst.B1 = read_matrix(up, "B1", inst.n_y());
  inst.b1 = read_vector(up, "b1");
  inst.c2 = read_vector(lo, "c2");
  inst.d2 = read_vector(lo, "d2");
  inst.A2 = read_matrix(lo, "A2", inst.n_x());
  inst.B2 = read_matrix(lo, "B2", inst.n_y());
  inst.b2 = read_vector(lo, "b2");
  inst.x_integer_indices = read_indices(j, "x_integer_indices");
  inst.y_integer_indices = read_indices(j, "y_integer_indices");
  require_valid(inst);
  return inst;
}

BilevelInstance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  }
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kMalformedProblem,
                path.string() + ": " + std::string(e.what()));
  }
  return instance_from_json(j);
}

void save_instance(const BilevelInstance& inst,
                   const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  }
  out << instance_to_json(inst).dump(2) << '\n';
  if (!out) throw Error(ErrorCode::kIoError, "write failed: " + path.string());
}

}  // namespace prs
