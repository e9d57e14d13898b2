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
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "submod_pricing/errors.hpp"
#include "submod_pricing/item_set.hpp"
#include "submod_pricing/multi_pricing.hpp"
#include "submod_pricing/single_pricing.hpp"
#include "submod_pricing/solution.hpp"
#include "submod_pricing/valuation.hpp"

namespace submod_pricing {

inline constexpr std::uint64_t kAggregateEnumerationCap = std::uint64_t{1} << 22;

// The joint valuation of buyers who pool their purchases:
//   f(X) = max over partitions (X_1, ..., X_n) of X of sum_i f_i(X_i),
// computed by exact enumeration of buyer assignments in mixed-radix order.
// Monotone, but in general not submodular even when every component is.
class AggregatedValuation final : public Valuation {
 public:
  explicit AggregatedValuation(
      std::vector<std::shared_ptr<const Valuation>> components)
      : Valuation(components.empty()
                      ? throw InputError("aggregate: needs components")
                      : components[0]->ground_ptr()),
        components_(std::move(components)) {
    for (const auto& c : components_) {
      if (!c) throw InputError("aggregate: null component");
      if (!(c->ground() == ground())) {
        throw InputError("aggregate: components disagree on the ground set");
      }
    }
  }

  static std::shared_ptr<AggregatedValuation> from_instance(const Instance& inst) {
    std::vector<std::shared_ptr<const Valuation>> comps;
    comps.reserve(inst.num_buyers());
    for (const Buyer& b : inst.buyers()) comps.push_back(b.valuation);
    return std::make_shared<AggregatedValuation>(std::move(comps));
  }

  int num_components() const { return static_cast<int>(components_.size()); }
  const Valuation& component(int i) const { return *components_.at(i); }
  const std::vector<std::shared_ptr<const Valuation>>& components() const {
    return components_;
  }

  bool submodular_hint() const override { return false; }

  double curvature_bound(int s) const override {
    double kappa = 0.0;
    for (const auto& c : components_) {
      kappa = std::max(kappa, c->curvature_bound(s));
    }
    return kappa;
  }

 protected:
  double value_impl(const ItemSet& set) const override;

 private:
  std::vector<std::shared_ptr<const Valuation>> components_;
};

namespace detail {

// Component values for every subset of `items`, indexed by the local bitmask
// (bit j = items[j]).
inline std::vector<std::vector<double>> component_tables(
    const AggregatedValuation& f, const std::vector<int>& items) {
  const int k = static_cast<int>(items.size());
  const int n = f.ground().size();
  std::vector<std::vector<double>> tables(f.num_components());
  for (int i = 0; i < f.num_components(); ++i) {
    tables[i].resize(std::size_t{1} << k);
    for (std::uint64_t local = 0; local < (std::uint64_t{1} << k); ++local) {
      ItemSet set(n);
      for (int j = 0; j < k; ++j) {
        if ((local >> j) & 1) set.insert(items[j]);
      }
      tables[i][local] = f.component(i).value(set);
    }
  }
  return tables;
}

// Best split of the items selected by `local_mask` among the components,
// enumerated in mixed-radix order (digit j = component of items[j]).
inline double aggregate_over_mask(
    const std::vector<std::vector<double>>& tables, int k,
    std::uint64_t local_mask) {
  const int nc = static_cast<int>(tables.size());
  std::vector<int> member;
  for (int j = 0; j < k; ++j) {
    if ((local_mask >> j) & 1) member.push_back(j);
  }
  if (member.empty()) return 0.0;
  std::vector<int> digit(member.size(), 0);
  std::vector<std::uint64_t> part(nc, 0);
  double best = -std::numeric_limits<double>::infinity();
  while (true) {
    std::fill(part.begin(), part.end(), 0);
    for (std::size_t j = 0; j < member.size(); ++j) {
      part[digit[j]] |= std::uint64_t{1} << member[j];
    }
    double total = 0.0;
    for (int i = 0; i < nc; ++i) total += tables[i][part[i]];
    if (total > best) best = total;
    std::size_t j = 0;
    while (j < digit.size() && digit[j] == nc - 1) digit[j++] = 0;
    if (j == digit.size()) break;
    ++digit[j];
  }
  return best;
}

}  // namespace detail

inline double AggregatedValuation::value_impl(const ItemSet& set) const {
  const std::vector<int> items = set.items();
  const int k = static_cast<int>(items.size());
  if (k > 22 ||
      detail::checked_pow(num_components(), k, kAggregateEnumerationCap) >
          kAggregateEnumerationCap) {
    throw CapacityError("aggregate: n^|X| exceeds the enumeration cap");
  }
  const auto tables = detail::component_tables(*this, items);
  return detail::aggregate_over_mask(tables, k,
                                     (std::uint64_t{1} << k) - 1);
}

inline double aggregate_value(const AggregatedValuation& f, const ItemSet& set) {
  return f.value(set);
}

// Materializes the aggregated valuation as an explicit table, enumerating all
// buyer assignments once per subset. Used by stability and shape checks that
// would otherwise re-enumerate per query.
inline std::shared_ptr<ExplicitValuation> aggregate_as_explicit(
    const AggregatedValuation& f) {
  const int n = f.ground().size();
  if (n > kBruteForceMaxItems ||
      detail::checked_pow(f.num_components() + 1, n,
                          kAggregateEnumerationCap) > kAggregateEnumerationCap) {
    throw CapacityError("aggregate table: (n+1)^|V| exceeds the enumeration cap");
  }
  std::vector<int> all(n);
  std::iota(all.begin(), all.end(), 0);
  const auto tables = detail::component_tables(f, all);
  std::vector<double> agg(std::size_t{1} << n);
  for (std::uint64_t mask = 0; mask < agg.size(); ++mask) {
    agg[mask] = detail::aggregate_over_mask(tables, n, mask);
  }
  return std::make_shared<ExplicitValuation>(f.ground_ptr(), std::move(agg),
                                             /*submodular=*/false);
}

// Revenue-maximal stable prices for a fixed bundle X under the aggregated
// valuation: p(x) = min over Y subseteq X with x in Y of f(Y) - f(Y \ x).
// Stable for any monotone f, submodular or not.
inline PriceVector exact_collab_prices(const AggregatedValuation& f,
                                       const ItemSet& set) {
  const std::vector<int> items = set.items();
  const int k = static_cast<int>(items.size());
  if (k > 22 ||
      detail::checked_pow(f.num_components() + 1, k,
                          kAggregateEnumerationCap) > kAggregateEnumerationCap) {
    throw CapacityError("exact prices: (n+1)^|X| exceeds the enumeration cap");
  }
  const auto tables = detail::component_tables(f, items);
  std::vector<double> agg(std::size_t{1} << k);
  for (std::uint64_t mask = 0; mask < agg.size(); ++mask) {
    agg[mask] = detail::aggregate_over_mask(tables, k, mask);
  }
  PriceVector prices(f.ground().size());
  for (int j = 0; j < k; ++j) {
    const std::uint64_t bit = std::uint64_t{1} << j;
    double lowest = std::numeric_limits<double>::infinity();
    for (std::uint64_t mask = 0; mask < agg.size(); ++mask) {
      if (mask & bit) lowest = std::min(lowest, agg[mask] - agg[mask ^ bit]);
    }
    prices[items[j]] = lowest;
  }
  return prices;
}

// Pricing for collaborating buyers with an unlimited shared budget. Ranks
// items by the best singleton value over buyers; prices each prefix item at
//   min over buyers i with f_i(x) > 0 of (f_i(X) - f_i(X \ x)) / f_i(x)
// scaled by the best singleton value. The result is stable with respect to
// the aggregated valuation when every component is monotone submodular.
inline PricingSolution solve_collab(const Instance& inst) {
  if (!inst.all_budgets_unlimited()) {
    throw UnsupportedError(
        "collaborating solver prices against a shared budget; use the "
        "budgeted variant");
  }
  const int n = inst.ground().size();
  const int nb = inst.num_buyers();

  std::vector<std::vector<double>> single(nb);
  for (int i = 0; i < nb; ++i) {
    single[i] = singleton_values(*inst.buyer(i).valuation);
  }
  std::vector<double> best_single(n, 0.0);
  for (int x = 0; x < n; ++x) {
    for (int i = 0; i < nb; ++i) {
      best_single[x] = std::max(best_single[x], single[i][x]);
    }
  }
  const std::vector<int> order = detail::positive_items_by_value(best_single);

  std::vector<std::vector<double>> marg(nb);
  const auto prefix_prices = [&](const ItemSet& prefix,
                                 std::vector<double>& out) {
    for (int i = 0; i < nb; ++i) {
      marg[i] = inst.buyer(i).valuation->marginals_within(prefix);
    }
    const std::vector<int> items = prefix.items();
    out.resize(items.size());
    for (std::size_t j = 0; j < items.size(); ++j) {
      const int x = items[j];
      int pick = -1;
      double pick_ratio = std::numeric_limits<double>::infinity();
      for (int i = 0; i < nb; ++i) {
        if (single[i][x] <= 0.0) continue;
        const double ratio = marg[i][j] / single[i][x];
        if (ratio < pick_ratio) {
          pick_ratio = ratio;
          pick = i;
        }
      }
      // pick >= 0: the ranking only admits items some buyer values.
      // Scaling the picked marginal keeps the price bit-exact when the
      // minimizing buyer also attains the best singleton value.
      out[j] = marg[pick][j] * (best_single[x] / single[pick][x]);
    }
  };

  double best_profit = 0.0;
  int best_s = 0;
  ItemSet prefix(n);
  std::vector<double> prices_buf;
  for (int s = 1; s <= static_cast<int>(order.size()); ++s) {
    prefix.insert(order[s - 1]);
    prefix_prices(prefix, prices_buf);
    const double profit = detail::sum_in_order(prices_buf);
    if (profit > best_profit) {
      best_profit = profit;
      best_s = s;
    }
  }

  ItemSet chosen(n);
  for (int j = 0; j < best_s; ++j) chosen.insert(order[j]);
  prefix_prices(chosen, prices_buf);

  PricingSolution sol;
  sol.prices = PriceVector(n);
  const std::vector<int> items = chosen.items();
  for (std::size_t j = 0; j < items.size(); ++j) {
    sol.prices[items[j]] = prices_buf[j];
  }
  sol.assignment = {chosen};
  sol.profit = sol.prices.sum(chosen);
  sol.chosen_s = best_s;
  bool all_submodular = true;
  for (int i = 0; i < nb; ++i) {
    all_submodular = all_submodular && inst.buyer(i).valuation->submodular_hint();
  }
  sol.alpha = all_submodular ? 1.0 : std::numeric_limits<double>::quiet_NaN();
  return sol;
}

// Shared-budget variant: solve, then discount proportionally to the budget.
// The discount argument does not rely on submodularity, so stability under
// the budgeted demand set carries over from the unlimited case.
inline PricingSolution solve_collab_budgeted(const Instance& inst,
                                             double budget) {
  if (!(budget >= 0.0)) throw InputError("budget must be >= 0");
  PricingSolution sol = solve_collab(inst);
  if (sol.profit <= budget) return sol;

  const ItemSet bundle = sol.assignment[0];
  double scale = budget / sol.profit;
  for (int round = 0; round < 10; ++round) {
    bundle.for_each([&](int i) { sol.prices[i] *= scale; });
    const double total = sol.prices.sum(bundle);
    if (total <= budget) break;
    scale = budget / total;
  }
  double total = sol.prices.sum(bundle);
  if (total > budget) {
    int largest = -1;
    bundle.for_each([&](int i) {
      if (largest < 0 || sol.prices[i] > sol.prices[largest]) largest = i;
    });
    if (largest >= 0) {
      sol.prices[largest] = std::max(0.0, sol.prices[largest] - (total - budget));
      total = sol.prices.sum(bundle);
    }
  }
  sol.profit = total;
  return sol;
}

// Exact collaborating optimum on small instances: enumerate every bundle and
// price it with the exact stable prices. Ties keep the smallest bundle in
// mask order.
inline PricingSolution brute_force_collab(const Instance& inst) {
  const auto aggregate = AggregatedValuation::from_instance(inst);
  const int n = inst.ground().size();
  if (n > 16) {
    throw CapacityError("collaborating brute force: needs <= 16 items");
  }
  if (detail::checked_pow(inst.num_buyers() + 1, n, kAggregateEnumerationCap) >
      kAggregateEnumerationCap) {
    throw CapacityError(
        "collaborating brute force: (n+1)^|V| exceeds the enumeration cap");
  }
  std::vector<int> all(n);
  std::iota(all.begin(), all.end(), 0);
  const auto tables = detail::component_tables(*aggregate, all);
  std::vector<double> agg(std::size_t{1} << n);
  for (std::uint64_t mask = 0; mask < agg.size(); ++mask) {
    agg[mask] = detail::aggregate_over_mask(tables, n, mask);
  }

  double best_profit = 0.0;
  std::uint64_t best_mask = 0;
  std::vector<double> best_prices, prices(n);
  for (std::uint64_t mask = 1; mask < agg.size(); ++mask) {
    double profit = 0.0;
    for (int j = 0; j < n; ++j) {
      const std::uint64_t bit = std::uint64_t{1} << j;
      if (!(mask & bit)) continue;
      double lowest = std::numeric_limits<double>::infinity();
      for (std::uint64_t sub = mask; sub != 0; sub = (sub - 1) & mask) {
        if (sub & bit) lowest = std::min(lowest, agg[sub] - agg[sub ^ bit]);
      }
      prices[j] = lowest;
      profit += lowest;
    }
    if (profit > best_profit) {
      best_profit = profit;
      best_mask = mask;
      best_prices = prices;
    }
  }

  PricingSolution sol;
  sol.prices = PriceVector(n);
  const ItemSet chosen = ItemSet::from_mask(n, best_mask);
  chosen.for_each([&](int j) { sol.prices[j] = best_prices[j]; });
  sol.assignment = {chosen};
  sol.profit = sol.prices.sum(chosen);
  sol.chosen_s = chosen.size();
  sol.alpha = 1.0;
  return sol;
}

}  // namespace submod_pricing
