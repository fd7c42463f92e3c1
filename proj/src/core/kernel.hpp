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

#ifndef SHAPBOX_CORE_KERNEL_HPP_
#define SHAPBOX_CORE_KERNEL_HPP_

namespace shapbox {

// Binomial coefficient C(n, k) as a double, built from the symmetric side so
// that Binomial(n, k) == Binomial(n, n - k) bit for bit. Returns +inf once the
// value leaves double range.
double Binomial(int n, int k);

// Shapley kernel weight of a single coalition with s present features out of
// num_features: (M - 1) / (C(M, s) * s * (M - s)).
//
// The empty and full coalitions have infinite weight; they are handled as
// constraints by the regression and never passed here (domain error).
double KernelWeight(int num_features, int s);

// Total kernel mass of every coalition of size s, C(M, s) * KernelWeight(M, s),
// which simplifies to (M - 1) / (s * (M - s)) and never under/overflows.
double SizeLevelMass(int num_features, int s);

}  // namespace shapbox

#endif  // SHAPBOX_CORE_KERNEL_HPP_
