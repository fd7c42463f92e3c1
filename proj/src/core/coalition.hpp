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

#ifndef SHAPBOX_CORE_COALITION_HPP_
#define SHAPBOX_CORE_COALITION_HPP_

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace shapbox {

// Binary mask over the varying features: 1 = present (value taken from the
// instance), 0 = missing (value taken from the background row).
struct Coalition {
  std::vector<std::uint8_t> mask;
  int size = 0;

  static Coalition FromMask(std::vector<std::uint8_t> mask);
  // "0110"-style rendering, character j is feature j.
  std::string ToString() const;

  bool operator==(const Coalition&) const = default;
};

// One regression row. output stays NaN until the model has been evaluated.
struct WeightedSample {
  Coalition coalition;
  double weight = 0.0;
  double output = std::numeric_limits<double>::quiet_NaN();
};

}  // namespace shapbox

#endif  // SHAPBOX_CORE_COALITION_HPP_
