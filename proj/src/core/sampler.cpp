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

#include "core/sampler.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <utility>

#include "core/error.hpp"
#include "core/kernel.hpp"

namespace shapbox {
namespace {

// All coalitions of exactly the given size in lexicographic mask order.
void AppendSizeLevel(int num_varying, int size, double weight,
                     std::vector<WeightedSample>& out) {
  std::vector<std::uint8_t> mask(num_varying, 0);
  std::fill(mask.end() - size, mask.end(), 1);
  do {
    WeightedSample sample;
    sample.coalition.mask = mask;
    sample.coalition.size = size;
    sample.weight = weight;
    out.push_back(std::move(sample));
  } while (std::next_permutation(mask.begin(), mask.end()));
}

// Coalitions in the level pair (s, M_v - s); s == M_v - s counts once.
double LevelCount(int num_varying, int s) {
  const double count = Binomial(num_varying, s);
  return 2 * s == num_varying ? count : 2 * count;
}

class RandomFill {
 public:
  RandomFill(int num_varying, std::uint64_t seed)
      : num_varying_(num_varying), rng_(seed), order_(num_varying) {
    std::iota(order_.begin(), order_.end(), 0);
  }

  std::vector<std::uint8_t> DrawSubset(int size) {
    std::vector<std::uint8_t> mask(num_varying_, 0);
    for (int i = 0; i < size; ++i) {
      std::uniform_int_distribution<int> pick(i, num_varying_ - 1);
      std::swap(order_[i], order_[pick(rng_)]);
      mask[order_[i]] = 1;
    }
    return mask;
  }

  std::mt19937_64& rng() { return rng_; }

 private:
  int num_varying_;
  std::mt19937_64 rng_;
  std::vector<int> order_;
};

}  // namespace

std::int64_t NonTrivialCoalitionCount(int num_varying) {
  if (num_varying <= 0) return 0;
  if (num_varying >= 63) return std::numeric_limits<std::int64_t>::max();
  return (std::int64_t{1} << num_varying) - 2;
}

CoalitionPlan SampleCoalitions(int num_varying, std::int64_t budget,
                               std::uint64_t seed) {
  if (budget < 2) {
    throw Error(ErrorCode::kConfig,
                "budget must be >= 2, got " + std::to_string(budget));
  }
  if (num_varying < 2) {
    throw Error(ErrorCode::kDomain,
                "coalition sampling needs at least 2 varying features, got " +
                    std::to_string(num_varying));
  }

  CoalitionPlan plan;
  const int half = num_varying / 2;

  if (budget >= NonTrivialCoalitionCount(num_varying)) {
    plan.full_enumeration = true;
    for (int s = 1; s <= half; ++s) {
      AppendSizeLevel(num_varying, s, KernelWeight(num_varying, s),
                      plan.samples);
      if (num_varying - s != s) {
        AppendSizeLevel(num_varying, num_varying - s,
                        KernelWeight(num_varying, num_varying - s),
                        plan.samples);
      }
    }
    plan.enumerated = static_cast<std::int64_t>(plan.samples.size());
    return plan;
  }

  auto pair_mass = [num_varying](int s) {
    return SizeLevelMass(num_varying, s) * (2 * s == num_varying ? 1.0 : 2.0);
  };
  double mass_left = 0.0;
  for (int s = 1; s <= half; ++s) mass_left += pair_mass(s);

  // Walk the paired size levels inward. A level is enumerated when it fits
  // and its mass-proportional share of the remaining budget would cover all
  // of its coalitions anyway, or when it uses up the budget exactly.
  // Enumerating a level the random fill would under-cover starves the
  // levels behind it.
  std::int64_t remaining = budget;
  int first_random_level = 1;
  for (; first_random_level <= half; ++first_random_level) {
    const int s = first_random_level;
    const double count = LevelCount(num_varying, s);
    if (count > static_cast<double>(remaining)) break;
    const double share =
        static_cast<double>(remaining) * pair_mass(s) / mass_left;
    if (count != static_cast<double>(remaining) &&
        share < count * (1.0 - 1e-12)) {
      break;
    }
    mass_left -= pair_mass(s);
    AppendSizeLevel(num_varying, s, KernelWeight(num_varying, s),
                    plan.samples);
    if (num_varying - s != s) {
      AppendSizeLevel(num_varying, num_varying - s,
                      KernelWeight(num_varying, num_varying - s),
                      plan.samples);
    }
    remaining -= static_cast<std::int64_t>(count);
  }
  plan.enumerated = static_cast<std::int64_t>(plan.samples.size());
  if (remaining == 0 || first_random_level > half) return plan;

  // Remaining levels share their kernel mass through random draws.
  std::vector<int> levels;
  std::vector<double> level_mass;
  double residual_mass = 0.0;
  for (int s = first_random_level; s <= half; ++s) {
    const double mass = pair_mass(s);
    levels.push_back(s);
    level_mass.push_back(mass);
    residual_mass += mass;
  }

  RandomFill fill(num_varying, seed);
  std::discrete_distribution<std::size_t> pick_level(level_mass.begin(),
                                                     level_mass.end());
  std::map<std::vector<std::uint8_t>, std::size_t> index;
  std::vector<double> multiplicity;
  const std::size_t first_random = plan.samples.size();
  std::int64_t distinct = 0;
  std::int64_t draws = 0;

  auto add = [&](std::vector<std::uint8_t> mask) {
    ++draws;
    auto [it, inserted] = index.try_emplace(mask, plan.samples.size());
    if (!inserted) {
      multiplicity[it->second - first_random] += 1.0;
      return;
    }
    plan.samples.push_back(
        WeightedSample{Coalition::FromMask(std::move(mask)), 0.0});
    multiplicity.push_back(1.0);
    ++distinct;
  };

  // Late draws mostly hit existing coalitions when the budget is close to the
  // number of coalitions left; the cap keeps that case bounded.
  const std::int64_t max_attempts = std::max<std::int64_t>(
      remaining * 64, 4096);
  for (std::int64_t attempt = 0;
       distinct < remaining && attempt < max_attempts; ++attempt) {
    const int size = levels[pick_level(fill.rng())];
    auto mask = fill.DrawSubset(size);
    std::vector<std::uint8_t> complement(mask.size());
    std::transform(mask.begin(), mask.end(), complement.begin(),
                   [](std::uint8_t bit) -> std::uint8_t { return bit ^ 1; });
    add(std::move(mask));
    if (distinct < remaining) add(std::move(complement));
  }

  for (std::size_t k = first_random; k < plan.samples.size(); ++k) {
    plan.samples[k].weight = residual_mass * multiplicity[k - first_random] /
                             static_cast<double>(draws);
  }
  plan.random_draws = draws;
  return plan;
}

}  // namespace shapbox
