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

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "submod_pricing/coverage.hpp"
#include "submod_pricing/errors.hpp"
#include "submod_pricing/item_set.hpp"
#include "submod_pricing/multi_pricing.hpp"
#include "submod_pricing/rng.hpp"
#include "submod_pricing/solution.hpp"
#include "submod_pricing/valuation.hpp"

namespace submod_pricing {

// ---------------------------------------------------------------------------
// Synthetic bipartite networks
// ---------------------------------------------------------------------------

struct SyntheticSpec {
  int num_channels = 0;
  int num_customers = 0;
  int customer_degree = 0;
  double q_max = 0.0;
  enum class LeftDegree { kUniform, kPowerLaw } distribution = LeftDegree::kUniform;
  std::uint64_t seed = 0;
  int num_buyers = 1;
  double gamma = 1.0;
};

// Random bipartite instance: every customer connects to `customer_degree`
// distinct channels (uniformly, or proportional to a rank^-2 channel weight),
// and each edge gets an independent activation probability per buyer, uniform
// in [0, q_max]. Deterministic function of the spec.
inline Instance gen_synthetic(const SyntheticSpec& spec) {
  if (spec.num_channels < 1) throw InputError("synthetic: needs >= 1 channel");
  if (spec.num_customers < 0) throw InputError("synthetic: negative customers");
  if (spec.customer_degree < 0 || spec.customer_degree > spec.num_channels) {
    throw InputError("synthetic: customer degree must be in 0..|V|");
  }
  if (!(spec.q_max >= 0.0 && spec.q_max <= 1.0)) {
    throw InputError("synthetic: q_max must be in [0, 1]");
  }
  if (spec.num_buyers < 1) throw InputError("synthetic: needs >= 1 buyer");

  const int n = spec.num_channels;
  std::vector<std::string> channel_ids(n);
  for (int i = 0; i < n; ++i) channel_ids[i] = "v" + std::to_string(i);
  auto ground = std::make_shared<const GroundSet>(std::move(channel_ids));

  std::vector<std::string> customers(spec.num_customers);
  for (int w = 0; w < spec.num_customers; ++w) {
    customers[w] = "w" + std::to_string(w);
  }

  Rng rng(spec.seed);
  std::vector<std::vector<int>> structure(spec.num_customers);
  if (spec.distribution == SyntheticSpec::LeftDegree::kUniform) {
    std::vector<int> pool(n);
    std::iota(pool.begin(), pool.end(), 0);
    for (int w = 0; w < spec.num_customers; ++w) {
      for (int j = 0; j < spec.customer_degree; ++j) {
        const int k = j + rng.below_int(n - j);
        std::swap(pool[j], pool[k]);
      }
      structure[w].assign(pool.begin(), pool.begin() + spec.customer_degree);
      std::sort(structure[w].begin(), structure[w].end());
    }
  } else {
    // Weighted sampling without replacement via exponential race keys:
    // channel v wins with weight (v+1)^-2.
    std::vector<double> weight(n);
    for (int v = 0; v < n; ++v) weight[v] = 1.0 / ((v + 1.0) * (v + 1.0));
    std::vector<std::pair<double, int>> keys(n);
    for (int w = 0; w < spec.num_customers; ++w) {
      for (int v = 0; v < n; ++v) {
        const double u = rng.unit();
        keys[v] = {-std::log1p(-u) / weight[v], v};
      }
      std::partial_sort(keys.begin(), keys.begin() + spec.customer_degree,
                        keys.end());
      structure[w].clear();
      for (int j = 0; j < spec.customer_degree; ++j) {
        structure[w].push_back(keys[j].second);
      }
      std::sort(structure[w].begin(), structure[w].end());
    }
  }

  std::vector<std::vector<CoverageValuation::Edge>> edges(spec.num_buyers);
  for (int w = 0; w < spec.num_customers; ++w) {
    for (int v : structure[w]) {
      for (int b = 0; b < spec.num_buyers; ++b) {
        edges[b].push_back({v, w, rng.unit() * spec.q_max});
      }
    }
  }

  std::vector<Buyer> buyers;
  buyers.reserve(spec.num_buyers);
  for (int b = 0; b < spec.num_buyers; ++b) {
    buyers.push_back({std::make_shared<CoverageValuation>(
                          ground, customers, edges[b], spec.gamma),
                      kUnlimitedBudget});
  }
  return Instance(std::move(buyers));
}

// ---------------------------------------------------------------------------
// Event-log ingestion
// ---------------------------------------------------------------------------

struct EventLogSpec {
  std::string path;
  int top_k = 1000;
  double slope = 0.0;      // q = clamp(slope * weight + intercept, 0, 1)
  double intercept = 0.0;
  double gamma = 1.0;
};

struct IngestResult {
  std::optional<Instance> instance;
  std::size_t data_rows = 0;
  std::size_t malformed_rows = 0;
  std::vector<std::string> warnings;  // capped; one entry per malformed row
};

namespace detail {

inline std::vector<std::string> split_csv_row(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) {
    // trim
    const auto begin = field.find_first_not_of(" \t\r");
    const auto end = field.find_last_not_of(" \t\r");
    fields.push_back(begin == std::string::npos
                         ? std::string()
                         : field.substr(begin, end - begin + 1));
  }
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

}  // namespace detail

// Builds a single-buyer coverage instance from a `user,item[,weight]` event
// log. Keeps the `top_k` items with the most events as channels; repeated
// (user, item) pairs are merged by summing weights (a missing weight column
// counts each event as 1). Edge probability is the affine map of the merged
// weight, clamped to [0, 1]. Malformed rows warn; more than 10% of them is a
// hard error.
inline IngestResult ingest_event_log_stream(std::istream& in,
                                            const EventLogSpec& spec) {
  if (spec.top_k < 1) throw InputError("event log: top_k must be >= 1");
  IngestResult result;

  std::string line;
  if (!std::getline(in, line)) throw InputError("event log: empty input");
  {
    const auto header = detail::split_csv_row(line);
    if (header.size() < 2 || header[0] != "user" || header[1] != "item" ||
        (header.size() == 3 && header[2] != "weight") || header.size() > 3) {
      throw InputError("event log: header must be user,item[,weight]");
    }
  }

  std::map<std::string, std::size_t> item_events;
  std::map<std::pair<std::string, std::string>, double> pair_weight;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    ++result.data_rows;
    const auto fields = detail::split_csv_row(line);
    if (fields.size() < 2 || fields.size() > 3 || fields[0].empty() ||
        fields[1].empty()) {
      ++result.malformed_rows;
      if (result.warnings.size() < 20) {
        result.warnings.push_back("row " + std::to_string(result.data_rows) +
                                  ": expected user,item[,weight]");
      }
      continue;
    }
    double weight = 1.0;
    if (fields.size() == 3 && !fields[2].empty()) {
      try {
        std::size_t used = 0;
        weight = std::stod(fields[2], &used);
        if (used != fields[2].size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        ++result.malformed_rows;
        if (result.warnings.size() < 20) {
          result.warnings.push_back("row " + std::to_string(result.data_rows) +
                                    ": bad weight '" + fields[2] + "'");
        }
        continue;
      }
    }
    ++item_events[fields[1]];
    pair_weight[{fields[0], fields[1]}] += weight;
  }

  if (result.data_rows > 0 &&
      result.malformed_rows * 10 > result.data_rows) {
    throw InputError("event log: more than 10% of rows are malformed");
  }
  if (item_events.empty()) {
    throw InputError("event log: no usable rows");
  }

  // Rank items by event count, ties by id.
  std::vector<std::pair<std::string, std::size_t>> ranked(item_events.begin(),
                                                          item_events.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  const int kept = std::min<std::size_t>(spec.top_k, ranked.size());
  std::vector<std::string> channel_ids(kept);
  for (int i = 0; i < kept; ++i) channel_ids[i] = ranked[i].first;
  auto ground = std::make_shared<const GroundSet>(channel_ids);

  std::set<std::string> user_set;
  for (const auto& [key, w] : pair_weight) {
    if (ground->contains(key.second)) user_set.insert(key.first);
  }
  std::vector<std::string> customers(user_set.begin(), user_set.end());
  std::map<std::string, int> customer_index;
  for (int i = 0; i < static_cast<int>(customers.size()); ++i) {
    customer_index[customers[i]] = i;
  }

  std::vector<CoverageValuation::Edge> edges;
  for (const auto& [key, w] : pair_weight) {
    if (!ground->contains(key.second)) continue;
    const double q =
        std::clamp(spec.slope * w + spec.intercept, 0.0, 1.0);
    edges.push_back({ground->index_of(key.second),
                     customer_index.at(key.first), q});
  }

  result.instance = Instance({Buyer{
      std::make_shared<CoverageValuation>(ground, std::move(customers), edges,
                                          spec.gamma),
      kUnlimitedBudget}});
  return result;
}

inline IngestResult ingest_event_log(const EventLogSpec& spec) {
  std::ifstream in(spec.path);
  if (!in) throw InputError("event log: cannot open '" + spec.path + "'");
  return ingest_event_log_stream(in, spec);
}

// ---------------------------------------------------------------------------
// Hardness-reduction fixtures
// ---------------------------------------------------------------------------

using Clause = std::array<std::string, 3>;

// Coverage instance encoding a positive 3-CNF formula: variables are
// channels, clauses are customers, and every incidence edge activates with
// probability 1. The profit potential of a variable set then counts the
// clauses it covers exactly once, so the single-buyer optimum reaches the
// number of clauses precisely when the formula has a one-in-three assignment.
inline Instance gen_3sat_fixture(const std::vector<Clause>& clauses) {
  std::set<std::string> variables;
  for (const Clause& c : clauses) {
    if (c[0] == c[1] || c[0] == c[2] || c[1] == c[2]) {
      throw InputError("3sat: repeated variable in a clause");
    }
    for (const std::string& v : c) {
      if (v.empty()) throw InputError("3sat: empty variable name");
      variables.insert(v);
    }
  }
  auto ground = std::make_shared<const GroundSet>(
      std::vector<std::string>(variables.begin(), variables.end()));
  std::vector<std::string> customers(clauses.size());
  std::vector<CoverageValuation::Edge> edges;
  for (int w = 0; w < static_cast<int>(clauses.size()); ++w) {
    customers[w] = "c" + std::to_string(w);
    for (const std::string& v : clauses[w]) {
      edges.push_back({ground->index_of(v), w, 1.0});
    }
  }
  return Instance({Buyer{
      std::make_shared<CoverageValuation>(ground, std::move(customers), edges,
                                          1.0),
      kUnlimitedBudget}});
}

// Independent decision route for the same formulas: plain enumeration of
// truth assignments, one clause-counting pass each. Returns the first
// satisfying set of true variables, if any.
inline std::optional<std::vector<std::string>> one_in_three_witness(
    const std::vector<Clause>& clauses) {
  std::set<std::string> variable_set;
  for (const Clause& c : clauses) {
    for (const std::string& v : c) variable_set.insert(v);
  }
  const std::vector<std::string> variables(variable_set.begin(),
                                           variable_set.end());
  const int k = static_cast<int>(variables.size());
  if (k > 26) throw CapacityError("3sat enumeration: needs <= 26 variables");
  std::map<std::string, int> index;
  for (int i = 0; i < k; ++i) index[variables[i]] = i;

  const std::uint64_t limit = std::uint64_t{1} << k;
  for (std::uint64_t mask = 0; mask < limit; ++mask) {
    bool ok = true;
    for (const Clause& c : clauses) {
      int trues = 0;
      for (const std::string& v : c) trues += (mask >> index.at(v)) & 1;
      if (trues != 1) {
        ok = false;
        break;
      }
    }
    if (ok) {
      std::vector<std::string> witness;
      for (int i = 0; i < k; ++i) {
        if ((mask >> i) & 1) witness.push_back(variables[i]);
      }
      return witness;
    }
  }
  return std::nullopt;
}

using Triple = std::array<int, 3>;

struct X3cFixture {
  Instance instance;
  Assignment assignment;       // buyer 1 holds the whole-universe item
  PriceVector candidate_prices;
};

// Two-buyer fixture from an exact-cover-by-3-sets question over 3l elements:
// item 0 stands for the whole element set, item i >= 1 for the i-th triple.
// Buyer 1 values a bundle by the elements its sets cover; buyer 2 is modular
// with a bonus on item 0. The candidate prices (l+1 on item 0, 1 elsewhere)
// are stable for the canonical assignment exactly when no exact cover exists.
inline X3cFixture gen_x3c_fixture(int l, const std::vector<Triple>& triples) {
  if (l < 1) throw InputError("x3c: needs l >= 1");
  const int elements = 3 * l;
  const int m = static_cast<int>(triples.size());
  if (m + 1 > kBruteForceMaxItems) {
    throw CapacityError("x3c: too many triples for an explicit table");
  }
  for (const Triple& t : triples) {
    for (int e : t) {
      if (e < 0 || e >= elements) throw InputError("x3c: element out of range");
    }
    if (t[0] == t[1] || t[0] == t[2] || t[1] == t[2]) {
      throw InputError("x3c: repeated element in a triple");
    }
  }

  std::vector<std::string> item_ids(m + 1);
  for (int i = 0; i <= m; ++i) item_ids[i] = "S" + std::to_string(i);
  auto ground = std::make_shared<const GroundSet>(std::move(item_ids));

  std::vector<std::string> customers(elements);
  std::vector<CoverageValuation::Edge> edges;
  for (int e = 0; e < elements; ++e) {
    customers[e] = "e" + std::to_string(e);
    edges.push_back({0, e, 1.0});  // item 0 covers everything
  }
  for (int i = 0; i < m; ++i) {
    for (int e : triples[i]) edges.push_back({i + 1, e, 1.0});
  }
  auto cover_value = std::make_shared<CoverageValuation>(
      ground, std::move(customers), edges, 1.0);

  auto modular_bonus = ExplicitValuation::from_function(
      ground,
      [&](std::uint64_t mask) {
        double v = static_cast<double>(std::popcount(mask));
        if (mask & 1) v += l;
        return v;
      },
      /*submodular=*/true);

  Instance inst({Buyer{cover_value, kUnlimitedBudget},
                 Buyer{modular_bonus, kUnlimitedBudget}});

  Assignment parts(2, ItemSet(m + 1));
  parts[0].insert(0);
  for (int i = 1; i <= m; ++i) parts[1].insert(i);

  PriceVector prices(m + 1);
  prices[0] = l + 1.0;
  for (int i = 1; i <= m; ++i) prices[i] = 1.0;
  return X3cFixture{std::move(inst), std::move(parts), std::move(prices)};
}

// Independent exact-cover search by direct enumeration of subcollections.
inline std::optional<std::vector<int>> exact_cover_witness(
    int l, const std::vector<Triple>& triples) {
  const int elements = 3 * l;
  const int m = static_cast<int>(triples.size());
  if (m > 26) throw CapacityError("x3c enumeration: needs <= 26 triples");
  if (elements > 60) throw CapacityError("x3c enumeration: needs <= 60 elements");
  std::vector<std::uint64_t> covers(m, 0);
  for (int i = 0; i < m; ++i) {
    for (int e : triples[i]) covers[i] |= std::uint64_t{1} << e;
  }
  const std::uint64_t all = (std::uint64_t{1} << elements) - 1;
  const std::uint64_t limit = std::uint64_t{1} << m;
  for (std::uint64_t pick = 0; pick < limit; ++pick) {
    std::uint64_t covered = 0;
    bool disjoint = true;
    for (int i = 0; i < m && disjoint; ++i) {
      if ((pick >> i) & 1) {
        if (covered & covers[i]) disjoint = false;
        covered |= covers[i];
      }
    }
    if (disjoint && covered == all) {
      std::vector<int> witness;
      for (int i = 0; i < m; ++i) {
        if ((pick >> i) & 1) witness.push_back(i);
      }
      return witness;
    }
  }
  return std::nullopt;
}

struct PartitionFixture {
  Instance instance;
  PriceVector zero_prices;
  long long target = 0;  // half of the total
};

// Two buyers with identical truncated-sum valuations min(T, sum of a_i over
// the bundle) and all-zero prices: a stable assignment exists exactly when
// the numbers admit an equal split.
inline PartitionFixture gen_partition_fixture(const std::vector<long long>& a) {
  if (a.empty()) throw InputError("partition: needs at least one number");
  long long total = 0;
  for (long long v : a) {
    if (v <= 0) throw InputError("partition: numbers must be positive");
    total += v;
  }
  if (total % 2 != 0) throw InputError("partition: total must be even");
  const long long target = total / 2;
  const int m = static_cast<int>(a.size());
  if (m > kBruteForceMaxItems) {
    throw CapacityError("partition: too many numbers for an explicit table");
  }

  std::vector<std::string> item_ids(m);
  for (int i = 0; i < m; ++i) item_ids[i] = "x" + std::to_string(i + 1);
  auto ground = std::make_shared<const GroundSet>(std::move(item_ids));
  auto truncated = ExplicitValuation::from_function(
      ground,
      [&](std::uint64_t mask) {
        long long sum = 0;
        for (int i = 0; i < m; ++i) {
          if ((mask >> i) & 1) sum += a[i];
        }
        return static_cast<double>(std::min(target, sum));
      },
      /*submodular=*/true);

  Instance inst({Buyer{truncated, kUnlimitedBudget},
                 Buyer{truncated, kUnlimitedBudget}});
  PriceVector prices(m, 0.0);
  return PartitionFixture{std::move(inst), std::move(prices), target};
}

// Independent equal-split search.
inline std::optional<std::vector<int>> equal_partition_witness(
    const std::vector<long long>& a) {
  const int m = static_cast<int>(a.size());
  if (m > 26) throw CapacityError("partition enumeration: needs <= 26 numbers");
  long long total = 0;
  for (long long v : a) total += v;
  if (total % 2 != 0) return std::nullopt;
  const long long target = total / 2;
  const std::uint64_t limit = std::uint64_t{1} << m;
  for (std::uint64_t mask = 0; mask < limit; ++mask) {
    long long sum = 0;
    for (int i = 0; i < m; ++i) {
      if ((mask >> i) & 1) sum += a[i];
    }
    if (sum == target) {
      std::vector<int> witness;
      for (int i = 0; i < m; ++i) {
        if ((mask >> i) & 1) witness.push_back(i);
      }
      return witness;
    }
  }
  return std::nullopt;
}

// Needle-in-a-haystack valuation: linear growth 2|X| up to the size of the
// hidden bundle, a dip to 2|X*| - 1 on every same-size impostor, and a
// plateau at 2|X*| from there on. Any value-oracle solver must effectively
// locate X* to price optimally.
inline std::shared_ptr<ExplicitValuation> gen_hidden_set_fixture(
    std::shared_ptr<const GroundSet> ground, const ItemSet& star) {
  if (star.universe() != ground->size()) {
    throw InputError("hidden set: bundle does not match the ground set");
  }
  const std::uint64_t star_mask = star.mask64();
  const int star_size = star.size();
  return ExplicitValuation::from_function(
      ground,
      [&](std::uint64_t mask) {
        const int size = std::popcount(mask);
        if (size < star_size) return 2.0 * size;
        if (size == star_size && mask != star_mask) return 2.0 * star_size - 1.0;
        return 2.0 * star_size;
      },
      /*submodular=*/true);
}

// f(X) = H(|X|), the harmonic number of the bundle size. Every bundle has
// profit potential 1, so welfare outruns extractable profit by H(|V|).
inline std::shared_ptr<ExplicitValuation> gen_harmonic(int n) {
  if (n < 1) throw InputError("harmonic: needs n >= 1");
  if (n > kBruteForceMaxItems) {
    throw CapacityError("harmonic: too many items for an explicit table");
  }
  std::vector<std::string> ids(n);
  for (int i = 0; i < n; ++i) ids[i] = "e" + std::to_string(i);
  auto ground = std::make_shared<const GroundSet>(std::move(ids));
  std::vector<double> harmonic(n + 1, 0.0);
  for (int k = 1; k <= n; ++k) harmonic[k] = harmonic[k - 1] + 1.0 / k;
  return ExplicitValuation::from_function(
      ground,
      [&](std::uint64_t mask) { return harmonic[std::popcount(mask)]; },
      /*submodular=*/true);
}

}  // namespace submod_pricing
