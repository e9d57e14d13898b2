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

#include "submod_pricing/coverage.hpp"

#include <cmath>
#include <memory>
#include <vector>

#include "gtest/gtest.h"
#include "submod_pricing/instances.hpp"
#include "test_util.hpp"

namespace submod_pricing {
namespace {

// Reference evaluation, written as directly as possible: per customer, the
// miss probability is the product of (1 - q) over incident selected channels.
double reference_value(const CoverageValuation& f, const ItemSet& set) {
  double total = 0.0;
  for (int w = 0; w < f.num_customers(); ++w) {
    double miss = 1.0;
    for (int x : set.items()) {
      for (const auto& [customer, q] : f.channel_edges(x)) {
        if (customer == w) miss *= 1.0 - q;
      }
    }
    total += f.revenue_per_customer() * (1.0 - miss);
  }
  return total;
}

TEST(CoverageTest, RejectsBadInput) {
  auto ground = std::make_shared<const GroundSet>(
      std::vector<std::string>{"u", "v"});
  std::vector<std::string> customers = {"w"};
  EXPECT_THROW(CoverageValuation(ground, customers, {{0, 0, 1.5}}, 1.0),
               InputError);
  EXPECT_THROW(CoverageValuation(ground, customers, {{2, 0, 0.5}}, 1.0),
               InputError);
  EXPECT_THROW(CoverageValuation(ground, customers, {{0, 1, 0.5}}, 1.0),
               InputError);
  EXPECT_THROW(
      CoverageValuation(ground, customers, {{0, 0, 0.5}, {0, 0, 0.2}}, 1.0),
      InputError);
  EXPECT_THROW(CoverageValuation(ground, customers, {{0, 0, 0.5}}, -1.0),
               InputError);
}

TEST(CoverageTest, MatchesReferenceOnRandomInstances) {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const Instance inst = testing::random_coverage_instance(seed);
    const auto& f =
        dynamic_cast<const CoverageValuation&>(*inst.buyer(0).valuation);
    const int n = f.ground().size();
    Rng rng(seed + 1000);
    for (int trial = 0; trial < 20; ++trial) {
      const ItemSet set =
          ItemSet::from_mask(n, rng.below(std::uint64_t{1} << n));
      EXPECT_NEAR(f.value(set), reference_value(f, set), 1e-12);
    }
  }
}

TEST(CoverageTest, BatchedMarginalsMatchDirectDifferences) {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const Instance inst = testing::random_coverage_instance(seed);
    const auto& f =
        dynamic_cast<const CoverageValuation&>(*inst.buyer(0).valuation);
    const int n = f.ground().size();
    Rng rng(seed + 2000);
    const ItemSet set =
        ItemSet::from_mask(n, rng.below(std::uint64_t{1} << n));
    const std::vector<double> batched = f.marginals_within(set);
    const std::vector<int> items = set.items();
    for (std::size_t j = 0; j < items.size(); ++j) {
      EXPECT_NEAR(batched[j], f.value(set) - f.value(set.without(items[j])),
                  1e-12);
    }
  }
}

TEST(CoverageTest, TrackerMatchesValue) {
  const Instance inst = testing::random_coverage_instance(7);
  const Valuation& f = *inst.buyer(0).valuation;
  auto tracker = f.make_tracker();
  ItemSet grown(f.ground().size());
  for (int x = 0; x < f.ground().size(); x += 2) {
    EXPECT_NEAR(tracker->gain(x), f.value(grown.with(x)) - f.value(grown),
                1e-12);
    tracker->add(x);
    grown.insert(x);
    EXPECT_NEAR(tracker->value(), f.value(grown), 1e-12);
  }
}

TEST(CurvatureBoundTest, ClosedForm) {
  // q = 0.3, d = 10, s = 5 -> 1 - 0.7^4.
  SyntheticSpec spec;
  spec.num_channels = 12;
  spec.num_customers = 30;
  spec.customer_degree = 10;
  spec.q_max = 1.0;
  spec.seed = 3;
  Instance inst = gen_synthetic(spec);
  const auto& generated =
      dynamic_cast<const CoverageValuation&>(*inst.buyer(0).valuation);
  EXPECT_EQ(generated.max_customer_degree(), 10);

  auto ground = std::make_shared<const GroundSet>(
      std::vector<std::string>{"v0", "v1", "v2", "v3", "v4", "v5"});
  std::vector<std::string> customers;
  std::vector<CoverageValuation::Edge> edges;
  // One customer wired to min(s,d)-many channels at exactly q = 0.3 would be
  // the worst case; the bound only reads the max degree and max probability.
  for (int w = 0; w < 2; ++w) customers.push_back("w" + std::to_string(w));
  for (int x = 0; x < 5; ++x) edges.push_back({x, 0, 0.3});
  for (int x = 0; x < 5; ++x) edges.push_back({x, 1, 0.1});
  edges.push_back({5, 1, 0.740});
  CoverageValuation f(ground, customers, edges, 1.0);
  EXPECT_EQ(f.max_customer_degree(), 6);
  EXPECT_NEAR(curvature_upper_bound(f, 5), 1.0 - std::pow(1.0 - 0.740, 4),
              1e-12);

  // Independent route to the same closed form: repeated multiplication.
  double pow_loop = 1.0;
  for (int i = 0; i < 4; ++i) pow_loop *= 1.0 - 0.740;
  EXPECT_NEAR(curvature_upper_bound(f, 5), 1.0 - pow_loop, 1e-12);
}

TEST(CurvatureBoundTest, DegenerateCases) {
  auto f = testing::two_channel_valuation();
  EXPECT_DOUBLE_EQ(curvature_upper_bound(*f, 1), 0.0);  // s = 1

  auto ground = std::make_shared<const GroundSet>(
      std::vector<std::string>{"u", "v"});
  CoverageValuation zero_q(ground, {"w"}, {{0, 0, 0.0}, {1, 0, 0.0}}, 1.0);
  EXPECT_DOUBLE_EQ(curvature_upper_bound(zero_q, 2), 0.0);  // q = 0

  CoverageValuation no_edges(ground, {}, {}, 1.0);
  EXPECT_DOUBLE_EQ(curvature_upper_bound(no_edges, 2), 0.0);
}

// Coverage with disjoint customer neighborhoods is additive, so the exact
// curvature vanishes everywhere.
TEST(CurvatureBoundTest, DisjointNeighborhoodsAreModular) {
  auto ground = std::make_shared<const GroundSet>(
      std::vector<std::string>{"u", "v", "x"});
  CoverageValuation f(ground, {"w0", "w1", "w2"},
                      {{0, 0, 0.4}, {1, 1, 0.7}, {2, 2, 0.2}}, 2.0);
  for (int s = 1; s <= 3; ++s) {
    EXPECT_DOUBLE_EQ(exact_curvature(f, s), 0.0);
    EXPECT_DOUBLE_EQ(curvature_upper_bound(f, s), 0.0);
  }
}

TEST(CurvatureProfileTest, BuildersAgreeWithPerSizeCalls) {
  const Instance inst = testing::random_coverage_instance(9, 5, 6);
  const auto& f =
      dynamic_cast<const CoverageValuation&>(*inst.buyer(0).valuation);
  const CurvatureProfile exact = exact_curvature_profile(f);
  const CurvatureProfile bound = coverage_curvature_profile(f);
  ASSERT_EQ(exact.kappa.size(), static_cast<std::size_t>(f.ground().size()));
  ASSERT_EQ(bound.kappa.size(), exact.kappa.size());
  EXPECT_EQ(exact.kind, CurvatureProfile::Kind::kExact);
  EXPECT_EQ(bound.kind, CurvatureProfile::Kind::kUpperBound);
  for (int s = 1; s <= f.ground().size(); ++s) {
    EXPECT_DOUBLE_EQ(exact.kappa[s - 1], exact_curvature(f, s));
    EXPECT_DOUBLE_EQ(bound.kappa[s - 1], curvature_upper_bound(f, s));
  }
}

// The closed-form bound dominates the exact curvature at every size.
TEST(CurvatureBoundProperty, DominatesExactOnRandomInstances) {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const Instance inst = testing::random_coverage_instance(seed);
    const auto& f =
        dynamic_cast<const CoverageValuation&>(*inst.buyer(0).valuation);
    for (int s = 1; s <= f.ground().size(); ++s) {
      EXPECT_GE(curvature_upper_bound(f, s) + 1e-12, exact_curvature(f, s))
          << "seed " << seed << " s " << s;
    }
  }
}

}  // namespace
}  // namespace submod_pricing
