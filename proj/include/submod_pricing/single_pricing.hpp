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
#include <numeric>
#include <vector>

#include "submod_pricing/errors.hpp"
#include "submod_pricing/item_set.hpp"
#include "submod_pricing/solution.hpp"
#include "submod_pricing/valuation.hpp"

namespace submod_pricing {

// The revenue-maximal stable prices for a fixed bundle X sold to one buyer:
// each x in X is priced at its marginal f(X) - f(X \ x), everything else at
// +infinity. For monotone submodular f the pair (p, X) is stable.
inline PriceVector price_for_assignment(const Valuation& f, const ItemSet& set) {
  PriceVector prices(f.ground().size());
  const std::vector<int> items = set.items();
  const std::vector<double> marg = f.marginals_within(set);
  for (std::size_t j = 0; j < items.size(); ++j) prices[items[j]] = marg[j];
  return prices;
}

namespace detail {

// Item indices with positive singleton value, ordered by value descending and
// item order ascending on ties. Zero-value items can never add profit, so the
// solvers leave them unassigned.
inline std::vector<int> positive_items_by_value(const std::vector<double>& single) {
  std::vector<int> order;
  for (int i = 0; i < static_cast<int>(single.size()); ++i) {
    if (single[i] > 0.0) order.push_back(i);
  }
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (single[a] != single[b]) return single[a] > single[b];
    return a < b;
  });
  return order;
}

inline double sum_in_order(const std::vector<double>& values) {
  double total = 0.0;
  for (double v : values) total += v;
  return total;
}

inline PricingSolution solution_for_bundle(const Valuation& f,
                                           const ItemSet& bundle) {
  PricingSolution sol;
  sol.prices = price_for_assignment(f, bundle);
  sol.assignment = {bundle};
  sol.profit = sol.prices.sum(bundle);
  sol.chosen_s = bundle.size();
  sol.alpha = f.submodular_hint()
                  ? 1.0
                  : std::numeric_limits<double>::quiet_NaN();
  return sol;
}

}  // namespace detail

// Pricing for one buyer with an unlimited budget. For each prefix size s of
// the items ranked by singleton value, prices the prefix at its within-set
// marginals and keeps the most profitable prefix; ties prefer the smaller s.
// For monotone submodular f the result is stable and its profit is at least
// (1 - kappa(|X*|)) times the optimum, where X* is an optimal bundle.
inline PricingSolution solve_single(const Valuation& f) {
  const int n = f.ground().size();
  const std::vector<double> single = singleton_values(f);
  const std::vector<int> order = detail::positive_items_by_value(single);

  double best_profit = 0.0;
  int best_s = 0;
  ItemSet prefix(n);
  for (int s = 1; s <= static_cast<int>(order.size()); ++s) {
    prefix.insert(order[s - 1]);
    const double profit = detail::sum_in_order(f.marginals_within(prefix));
    if (profit > best_profit) {
      best_profit = profit;
      best_s = s;
    }
  }

  ItemSet chosen(n);
  for (int j = 0; j < best_s; ++j) chosen.insert(order[j]);
  return detail::solution_for_bundle(f, chosen);
}

// Budgeted variant: run the unlimited solver, then discount the assigned
// prices proportionally until the total equals the budget. The discounted
// pair stays stable under the budget-constrained demand set.
inline PricingSolution solve_single_budgeted(const Valuation& f, double budget) {
  if (!(budget >= 0.0)) throw InputError("budget must be >= 0");
  PricingSolution sol = solve_single(f);
  if (sol.profit <= budget) return sol;

  const ItemSet& bundle = sol.assignment[0];
  double scale = budget / sol.profit;
  for (int round = 0; round < 10; ++round) {
    bundle.for_each([&](int i) { sol.prices[i] *= scale; });
    const double total = sol.prices.sum(bundle);
    if (total <= budget) break;
    scale = budget / total;
  }
  // Rounding can leave the total a few ulps above the budget; settle it on
  // the largest-priced item.
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

// Exact single-buyer optimum by enumerating all bundles and maximizing the
// profit potential h. Ties keep the first maximizer in mask order, i.e. the
// lexicographically smallest bundle.
inline PricingSolution brute_force_single(const Valuation& f) {
  const int n = f.ground().size();
  if (n > kBruteForceMaxItems) {
    throw CapacityError("single-buyer brute force: needs <= " +
                        std::to_string(kBruteForceMaxItems) + " items");
  }
  double best = 0.0;
  std::uint64_t best_mask = 0;
  const std::uint64_t limit = std::uint64_t{1} << n;
  for (std::uint64_t mask = 1; mask < limit; ++mask) {
    const ItemSet set = ItemSet::from_mask(n, mask);
    const double h = detail::sum_in_order(f.marginals_within(set));
    if (h > best) {
      best = h;
      best_mask = mask;
    }
  }
  return detail::solution_for_bundle(f, ItemSet::from_mask(n, best_mask));
}

}  // namespace submod_pricing
