/*
 * Copyright 2026 The shapbox Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef SHAPBOX_CORE_SAMPLER_HPP_
#define SHAPBOX_CORE_SAMPLER_HPP_

#include <cstdint>
#include <vector>

#include "core/coalition.hpp"

namespace shapbox {

struct CoalitionPlan {
  std::vector<WeightedSample> samples;
  // True when every coalition of size 1..M_v-1 appears exactly once with its
  // exact kernel weight.
  bool full_enumeration = false;
  // Coalitions contributed by fully enumerated size levels; the rest were
  // drawn at random.
  std::int64_t enumerated = 0;
  std::int64_t random_draws = 0;
};

// 2^num_varying - 2, saturated at INT64_MAX.
std::int64_t NonTrivialCoalitionCount(int num_varying);

// Chooses the regression rows for num_varying features under a row budget.
//
// With budget >= 2^M_v - 2 every non-trivial coalition is emitted once, sizes
// ordered outside-in (1, M_v-1, 2, M_v-2, ...) and lexicographic within a
// size. Otherwise paired size levels (s, M_v - s) are walked inward and each
// level whose coalitions all fit in the remaining budget is enumerated with the
// level's kernel mass split evenly. The rest of the budget is drawn at random
// from the remaining levels in proportion to their kernel mass; every draw also
// adds its complement, and repeated coalitions accumulate weight instead of
// adding rows.
//
// Throws kConfig for budget < 2 and kDomain for num_varying < 2.
CoalitionPlan SampleCoalitions(int num_varying, std::int64_t budget,
                               std::uint64_t seed);

}  // namespace shapbox

#endif  // SHAPBOX_CORE_SAMPLER_HPP_
