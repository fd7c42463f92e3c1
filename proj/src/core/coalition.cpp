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

#include "core/coalition.hpp"

#include <utility>

namespace shapbox {

Coalition Coalition::FromMask(std::vector<std::uint8_t> mask) {
  Coalition c;
  for (auto& bit : mask) {
    bit = bit ? 1 : 0;
    c.size += bit;
  }
  c.mask = std::move(mask);
  return c;
}

std::string Coalition::ToString() const {
  std::string out;
  out.reserve(mask.size());
  for (const auto bit : mask) out.push_back(bit ? '1' : '0');
  return out;
}

}  // namespace shapbox
