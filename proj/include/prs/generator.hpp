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

#ifndef PRS_GENERATOR_HPP_
#define PRS_GENERATOR_HPP_

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>

#include "prs/model.hpp"

namespace prs {

struct SizeSpec {
  std::string name;
  std::size_t n_xC = 0, n_xI = 0, n_yC = 0, n_yI = 0;
  // Structural lower rows, before the follower bound rows.
  std::size_t m2 = 0;
  double density = 0.7;
  // Upper rows are |x_i| <= box.
  double box = 4.85;
  // Lower rows |y_j| <= y_bound for every continuous follower variable.
  double y_bound = 10.0;
};

// "tiny", "small", "mid" or "large" (case-insensitive). Throws
// kInvalidArgument otherwise.
SizeSpec size_preset(std::string_view name);

struct GeneratedInstance {
  BilevelInstance instance;
  std::uint64_t seed = 0;
  // Draws taken before one passed every filter.
  std::size_t attempts = 0;
};

// Random instance: coefficients uniform on {-10.0, -9.9, ..., 10.0}, each entry
// of A2, B2 and the objective vectors kept with probability `density`.
// Continuous variables come first, then integers. A draw is kept when the
// high-point relaxation is solvable, the follower is feasible at its x and
// the relaxation's (x, y) is not already bilevel feasible; otherwise the same
// stream is drawn again. Throws kGenerationExhausted after retry_cap draws.
GeneratedInstance generate_instance(const SizeSpec& spec, std::uint64_t seed,
                                    std::size_t retry_cap = 1000);

// One unfiltered draw from the generator's distribution.
BilevelInstance draw_instance(const SizeSpec& spec, std::mt19937_64& rng);

}  // namespace prs

#endif  // PRS_GENERATOR_HPP_
