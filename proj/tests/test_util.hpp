// Copyright 2026 The Authors.
//
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

#pragma once

#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "submod_pricing/coverage.hpp"
#include "submod_pricing/instances.hpp"
#include "submod_pricing/multi_pricing.hpp"
#include "submod_pricing/valuation.hpp"

namespace submod_pricing::testing {

// Two channels u, v and a single customer reachable from both with
// probability 0.9: selling one channel at 0.9 beats selling both at their
// 0.09 marginals.
inline std::shared_ptr<CoverageValuation> two_channel_valuation() {
  auto ground = std::make_shared<const GroundSet>(
      std::vector<std::string>{"u", "v"});
  return CoverageValuation::with_named_edges(
      ground, {"w"}, {{"u", "w", 0.9}, {"v", "w", 0.9}}, 1.0);
}

// Hand-built pair of submodular three-item valuations whose pooled
// (aggregated) valuation is not submodular.
inline std::pair<std::shared_ptr<ExplicitValuation>,
                 std::shared_ptr<ExplicitValuation>>
pooled_counterexample_pair() {
  auto ground = std::make_shared<const GroundSet>(
      std::vector<std::string>{"a", "b", "c"});
  // Masks: a=1, b=2, c=4.
  std::vector<double> f1 = {0, 1, 1, 2, 1, 2, 1, 2};
  std::vector<double> f2 = {0, 2, 2, 3, 2, 3, 4, 4};
  return {std::make_shared<ExplicitValuation>(ground, f1, true),
          std::make_shared<ExplicitValuation>(ground, f2, true)};
}

inline Instance pooled_counterexample_instance() {
  auto [f1, f2] = pooled_counterexample_pair();
  return Instance({Buyer{f1, kUnlimitedBudget}, Buyer{f2, kUnlimitedBudget}});
}

// Additive valuation with the given singleton values.
inline std::shared_ptr<ExplicitValuation> modular_valuation(
    const std::vector<double>& weights) {
  const int n = static_cast<int>(weights.size());
  std::vector<std::string> ids(n);
  for (int i = 0; i < n; ++i) ids[i] = std::string(1, 'a' + i);
  auto ground = std::make_shared<const GroundSet>(std::move(ids));
  return ExplicitValuation::from_function(
      ground,
      [&](std::uint64_t mask) {
        double total = 0.0;
        for (int i = 0; i < n; ++i) {
          if ((mask >> i) & 1) total += weights[i];
        }
        return total;
      },
      /*submodular=*/true);
}

inline Instance random_coverage_instance(std::uint64_t seed, int max_items = 8,
                                         int max_customers = 12,
                                         int num_buyers = 1) {
  Rng rng(seed);
  SyntheticSpec spec;
  spec.num_channels = 2 + rng.below_int(max_items - 1);
  spec.num_customers = 1 + rng.below_int(max_customers);
  spec.customer_degree = 1 + rng.below_int(std::min(spec.num_channels, 4));
  spec.q_max = 0.1 * (1 + rng.below_int(9));
  spec.distribution = rng.below_int(2) == 0
                          ? SyntheticSpec::LeftDegree::kUniform
                          : SyntheticSpec::LeftDegree::kPowerLaw;
  spec.seed = seed * 2654435761u + 17;
  spec.num_buyers = num_buyers;
  return gen_synthetic(spec);
}

}  // namespace submod_pricing::testing
