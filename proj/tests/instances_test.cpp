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

#include "submod_pricing/instances.hpp"

#include <cmath>
#include <memory>
#include <sstream>
#include <vector>

#include "gtest/gtest.h"
#include "submod_pricing/single_pricing.hpp"
#include "submod_pricing/verify.hpp"
#include "test_util.hpp"

namespace submod_pricing {
namespace {

TEST(GenSyntheticTest, DegreeAndProbabilityInvariants) {
  SyntheticSpec spec;
  spec.num_channels = 4;
  spec.num_customers = 10;
  spec.customer_degree = 2;
  spec.q_max = 0.3;
  spec.seed = 7;
  const Instance inst = gen_synthetic(spec);
  const auto& f =
      dynamic_cast<const CoverageValuation&>(*inst.buyer(0).valuation);
  EXPECT_EQ(f.ground().size(), 4);
  EXPECT_EQ(f.num_customers(), 10);
  EXPECT_EQ(f.num_edges(), 20);
  for (int w = 0; w < f.num_customers(); ++w) {
    const auto& edges = f.customer_edges(w);
    ASSERT_EQ(edges.size(), 2u);
    EXPECT_NE(edges[0].first, edges[1].first);
    for (const auto& [channel, q] : edges) {
      EXPECT_GE(q, 0.0);
      EXPECT_LE(q, 0.3);
    }
  }
}

TEST(GenSyntheticTest, ZeroProbabilityCeilingKillsTheValuation) {
  SyntheticSpec spec;
  spec.num_channels = 3;
  spec.num_customers = 5;
  spec.customer_degree = 2;
  spec.q_max = 0.0;
  const Instance inst = gen_synthetic(spec);
  EXPECT_EQ(inst.buyer(0).valuation->value(ItemSet::full(3)), 0.0);
}

TEST(GenSyntheticTest, DeterministicUnderSeed) {
  SyntheticSpec spec;
  spec.num_channels = 5;
  spec.num_customers = 8;
  spec.customer_degree = 3;
  spec.q_max = 0.6;
  spec.seed = 11;
  spec.num_buyers = 2;
  spec.distribution = SyntheticSpec::LeftDegree::kPowerLaw;
  const Instance a = gen_synthetic(spec);
  const Instance b = gen_synthetic(spec);
  for (int i = 0; i < 2; ++i) {
    const auto& fa = dynamic_cast<const CoverageValuation&>(*a.buyer(i).valuation);
    const auto& fb = dynamic_cast<const CoverageValuation&>(*b.buyer(i).valuation);
    for (int w = 0; w < fa.num_customers(); ++w) {
      EXPECT_EQ(fa.customer_edges(w), fb.customer_edges(w));
    }
  }
}

TEST(GenSyntheticTest, SharedStructureAcrossBuyers) {
  SyntheticSpec spec;
  spec.num_channels = 6;
  spec.num_customers = 9;
  spec.customer_degree = 2;
  spec.q_max = 0.5;
  spec.num_buyers = 3;
  const Instance inst = gen_synthetic(spec);
  const auto& f0 = dynamic_cast<const CoverageValuation&>(*inst.buyer(0).valuation);
  for (int i = 1; i < 3; ++i) {
    const auto& fi =
        dynamic_cast<const CoverageValuation&>(*inst.buyer(i).valuation);
    for (int w = 0; w < f0.num_customers(); ++w) {
      ASSERT_EQ(f0.customer_edges(w).size(), fi.customer_edges(w).size());
      for (std::size_t k = 0; k < f0.customer_edges(w).size(); ++k) {
        EXPECT_EQ(f0.customer_edges(w)[k].first, fi.customer_edges(w)[k].first);
      }
    }
  }
}

TEST(GenSyntheticTest, RejectsBadSpecs) {
  SyntheticSpec spec;
  spec.num_channels = 3;
  spec.num_customers = 2;
  spec.customer_degree = 4;  // > |V|
  EXPECT_THROW(gen_synthetic(spec), InputError);
  spec.customer_degree = 2;
  spec.q_max = 1.5;
  EXPECT_THROW(gen_synthetic(spec), InputError);
}

// Generated instances are always monotone submodular.
TEST(GenSyntheticProperty, AlwaysMonotoneSubmodular) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const Instance inst = testing::random_coverage_instance(seed);
    const auto report = check_monotone_submodular(*inst.buyer(0).valuation);
    EXPECT_TRUE(report.pass()) << "seed " << seed;
  }
}

TEST(IngestEventLogTest, SmallLogTopK) {
  std::istringstream log(
      "user,item,weight\n"
      "alice,song1,5\n"
      "bob,song1,3\n"
      "alice,song2,4\n"
      "bob,song3,1\n");
  EventLogSpec spec;
  spec.top_k = 2;
  spec.slope = 0.02;
  const IngestResult result = ingest_event_log_stream(log, spec);
  ASSERT_TRUE(result.instance.has_value());
  const auto& f = dynamic_cast<const CoverageValuation&>(
      *result.instance->buyer(0).valuation);
  // song1 has two events; song2/song3 tie at one and song2 wins by id.
  EXPECT_EQ(f.ground().ids(), (std::vector<std::string>{"song1", "song2"}));
  EXPECT_EQ(f.num_edges(), 3);
  EXPECT_EQ(result.malformed_rows, 0u);
}

TEST(IngestEventLogTest, AffineProbabilityMap) {
  std::istringstream log(
      "user,item,weight\n"
      "u1,movie,5\n");
  EventLogSpec spec;
  spec.top_k = 1;
  spec.slope = 0.02;
  const IngestResult result = ingest_event_log_stream(log, spec);
  const auto& f = dynamic_cast<const CoverageValuation&>(
      *result.instance->buyer(0).valuation);
  EXPECT_NEAR(f.customer_edges(0)[0].second, 0.10, 1e-12);

  std::istringstream log2(
      "user,item,weight\n"
      "u1,book,10\n");
  EventLogSpec spec2;
  spec2.top_k = 1;
  spec2.slope = 0.01;
  spec2.intercept = 0.01;
  const IngestResult result2 = ingest_event_log_stream(log2, spec2);
  const auto& f2 = dynamic_cast<const CoverageValuation&>(
      *result2.instance->buyer(0).valuation);
  EXPECT_NEAR(f2.customer_edges(0)[0].second, 0.11, 1e-12);
}

TEST(IngestEventLogTest, MissingWeightCountsEvents) {
  std::istringstream log(
      "user,item\n"
      "u1,song\n"
      "u1,song\n"
      "u1,song\n");
  EventLogSpec spec;
  spec.top_k = 5;
  spec.slope = 0.01;
  const IngestResult result = ingest_event_log_stream(log, spec);
  const auto& f = dynamic_cast<const CoverageValuation&>(
      *result.instance->buyer(0).valuation);
  // Three unit-weight events merge into one edge with weight 3.
  EXPECT_EQ(f.num_edges(), 1);
  EXPECT_NEAR(f.customer_edges(0)[0].second, 0.03, 1e-12);
}

TEST(IngestEventLogTest, MalformedRowsWarnThenFail) {
  std::istringstream warn_log(
      "user,item,weight\n"
      "u1,i1,1\n"
      "u2,i1,oops\n"
      "u3,i1,2\n"
      "u4,i1,2\n"
      "u5,i1,2\n"
      "u6,i1,2\n"
      "u7,i1,2\n"
      "u8,i1,2\n"
      "u9,i1,2\n"
      "u10,i1,2\n"
      "u11,i1,2\n");
  EventLogSpec spec;
  spec.top_k = 3;
  const IngestResult ok = ingest_event_log_stream(warn_log, spec);
  EXPECT_EQ(ok.malformed_rows, 1u);
  EXPECT_EQ(ok.warnings.size(), 1u);

  std::istringstream bad_log(
      "user,item,weight\n"
      "u1,i1,1\n"
      "u2,i1,oops\n");
  EXPECT_THROW(ingest_event_log_stream(bad_log, spec), InputError);
}

TEST(Gen3SatTest, SingleClause) {
  const Instance inst = gen_3sat_fixture({Clause{"x1", "x2", "x3"}});
  EXPECT_EQ(inst.ground().size(), 3);
  const PricingSolution best = brute_force_single(*inst.buyer(0).valuation);
  EXPECT_DOUBLE_EQ(best.profit, 1.0);  // one clause covered exactly once

  const auto witness = one_in_three_witness({Clause{"x1", "x2", "x3"}});
  ASSERT_TRUE(witness.has_value());
  EXPECT_EQ(witness->size(), 1u);
}

TEST(Gen3SatTest, TwoClauseFormula) {
  const std::vector<Clause> clauses = {Clause{"x1", "x2", "x3"},
                                       Clause{"x1", "x2", "x4"}};
  const Instance inst = gen_3sat_fixture(clauses);
  const PricingSolution best = brute_force_single(*inst.buyer(0).valuation);
  const auto witness = one_in_three_witness(clauses);
  ASSERT_TRUE(witness.has_value());
  EXPECT_DOUBLE_EQ(best.profit, 2.0);
}

TEST(Gen3SatTest, RejectsDegenerateClauses) {
  EXPECT_THROW(gen_3sat_fixture({Clause{"x1", "x1", "x2"}}), InputError);
  EXPECT_THROW(gen_3sat_fixture({Clause{"", "x1", "x2"}}), InputError);
}

TEST(Gen3SatTest, EmptyFormulaHasZeroProfit) {
  const Instance inst = gen_3sat_fixture({});
  EXPECT_EQ(inst.ground().size(), 0);
  EXPECT_EQ(brute_force_single(*inst.buyer(0).valuation).profit, 0.0);
  EXPECT_EQ(solve_single(*inst.buyer(0).valuation).profit, 0.0);
}

// Exhaustive agreement between the pricing route (optimum hits the clause
// count) and the direct truth-assignment enumeration.
TEST(Gen3SatProperty, PricingOptimumAgreesWithEnumeration) {
  Rng rng(424242);
  for (int trial = 0; trial < 60; ++trial) {
    const int num_vars = 3 + rng.below_int(4);  // 3..6
    const int num_clauses = 1 + rng.below_int(4);
    std::vector<Clause> clauses;
    for (int c = 0; c < num_clauses; ++c) {
      int a = rng.below_int(num_vars);
      int b = rng.below_int(num_vars);
      int d = rng.below_int(num_vars);
      while (b == a) b = rng.below_int(num_vars);
      while (d == a || d == b) d = rng.below_int(num_vars);
      clauses.push_back(Clause{"x" + std::to_string(a), "x" + std::to_string(b),
                               "x" + std::to_string(d)});
    }
    const Instance inst = gen_3sat_fixture(clauses);
    const double optimum = brute_force_single(*inst.buyer(0).valuation).profit;
    const bool reaches_clause_count =
        std::abs(optimum - static_cast<double>(num_clauses)) < 1e-9;
    EXPECT_EQ(reaches_clause_count, one_in_three_witness(clauses).has_value())
        << "trial " << trial;
  }
}

TEST(GenX3cTest, CoverExistsMakesCandidateUnstable) {
  // One triple covering all of E: an exact cover, so the candidate prices
  // cannot be stable for the canonical assignment.
  const X3cFixture fixture = gen_x3c_fixture(1, {Triple{0, 1, 2}});
  EXPECT_TRUE(exact_cover_witness(1, {Triple{0, 1, 2}}).has_value());
  const auto report = check_stable(fixture.instance, fixture.candidate_prices,
                                   fixture.assignment);
  EXPECT_FALSE(report.stable);
  // The profitable deviation is the cover itself, with utility 2l vs 2l - 1.
  ASSERT_TRUE(report.worst_deviation.has_value());
  EXPECT_EQ(report.worst_deviation->buyer, 0);
  EXPECT_NEAR(report.worst_deviation->utility_gain, 1.0, 1e-9);
}

TEST(GenX3cTest, NoTriplesMeansStable) {
  const X3cFixture fixture = gen_x3c_fixture(1, {});
  EXPECT_FALSE(exact_cover_witness(1, {}).has_value());
  EXPECT_TRUE(check_stable(fixture.instance, fixture.candidate_prices,
                           fixture.assignment)
                  .stable);
}

TEST(GenX3cProperty, StabilityAgreesWithCoverSearch) {
  Rng rng(777);
  for (int trial = 0; trial < 40; ++trial) {
    const int l = 1 + rng.below_int(2);  // 3 or 6 elements
    const int elements = 3 * l;
    const int num_triples = rng.below_int(5);
    std::vector<Triple> triples;
    for (int t = 0; t < num_triples; ++t) {
      int a = rng.below_int(elements);
      int b = rng.below_int(elements);
      int c = rng.below_int(elements);
      while (b == a) b = rng.below_int(elements);
      while (c == a || c == b) c = rng.below_int(elements);
      triples.push_back(Triple{a, b, c});
    }
    const X3cFixture fixture = gen_x3c_fixture(l, triples);
    const bool stable = check_stable(fixture.instance, fixture.candidate_prices,
                                     fixture.assignment)
                            .stable;
    EXPECT_EQ(stable, !exact_cover_witness(l, triples).has_value())
        << "trial " << trial;
  }
}

TEST(GenPartitionTest, SplittableAndUnsplittable) {
  {
    const PartitionFixture fixture = gen_partition_fixture({1, 1, 2});
    const auto assignment =
        exists_stable_assignment(fixture.instance, fixture.zero_prices);
    EXPECT_TRUE(assignment.has_value());
    EXPECT_TRUE(equal_partition_witness({1, 1, 2}).has_value());
  }
  {
    // 1+1+1+5 is even but cannot split evenly.
    const PartitionFixture fixture = gen_partition_fixture({1, 1, 1, 5});
    EXPECT_FALSE(
        exists_stable_assignment(fixture.instance, fixture.zero_prices)
            .has_value());
    EXPECT_FALSE(equal_partition_witness({1, 1, 1, 5}).has_value());
  }
  {
    const PartitionFixture fixture = gen_partition_fixture({2, 2});
    EXPECT_TRUE(exists_stable_assignment(fixture.instance, fixture.zero_prices)
                    .has_value());
  }
}

TEST(GenPartitionTest, RejectsOddTotals) {
  EXPECT_THROW(gen_partition_fixture({1, 1, 1}), InputError);
  EXPECT_THROW(gen_partition_fixture({0, 2}), InputError);
}

TEST(GenPartitionProperty, StableAssignmentAgreesWithSubsetSum) {
  Rng rng(909090);
  for (int trial = 0; trial < 30; ++trial) {
    const int m = 2 + rng.below_int(5);
    std::vector<long long> values;
    long long total = 0;
    for (int i = 0; i < m; ++i) {
      values.push_back(1 + rng.below_int(7));
      total += values.back();
    }
    if (total % 2 != 0) values.back() += 1;
    const PartitionFixture fixture = gen_partition_fixture(values);
    const bool stable =
        exists_stable_assignment(fixture.instance, fixture.zero_prices)
            .has_value();
    EXPECT_EQ(stable, equal_partition_witness(values).has_value())
        << "trial " << trial;
  }
}

TEST(GenHiddenSetTest, ThreeCaseShape) {
  auto ground = std::make_shared<const GroundSet>(
      std::vector<std::string>{"a", "b", "c", "d"});
  const ItemSet star = make_set(*ground, {"a", "b"});
  auto f = gen_hidden_set_fixture(ground, star);
  EXPECT_EQ(f->value(ItemSet(4)), 0.0);
  EXPECT_EQ(f->value(make_set(*ground, {"c"})), 2.0);
  EXPECT_EQ(f->value(make_set(*ground, {"a", "c"})), 3.0);  // impostor pair
  EXPECT_EQ(f->value(star), 4.0);
  EXPECT_EQ(f->value(make_set(*ground, {"a", "b", "c"})), 4.0);

  const PricingSolution best = brute_force_single(*f);
  EXPECT_DOUBLE_EQ(best.profit, 4.0);
  EXPECT_EQ(best.assignment[0], star);
  EXPECT_DOUBLE_EQ(best.prices[ground->index_of("a")], 2.0);
  EXPECT_DOUBLE_EQ(best.prices[ground->index_of("b")], 2.0);

  EXPECT_TRUE(check_monotone_submodular(*f).pass());
}

TEST(GenHarmonicTest, PartialSums) {
  auto f = gen_harmonic(3);
  EXPECT_DOUBLE_EQ(f->value(ItemSet::from_mask(3, 0b001)), 1.0);
  EXPECT_NEAR(f->value(ItemSet::full(3)), 11.0 / 6.0, 1e-12);
  EXPECT_THROW(gen_harmonic(0), InputError);
}

}  // namespace
}  // namespace submod_pricing
