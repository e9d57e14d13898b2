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
#include <vector>

#include "submod_pricing/item_set.hpp"
#include "submod_pricing/rng.hpp"
#include "submod_pricing/single_pricing.hpp"
#include "submod_pricing/solution.hpp"
#include "submod_pricing/valuation.hpp"

namespace submod_pricing {

// Greedy demand simulation: starting from the empty set, repeatedly buy the
// affordable item with the best utility gain f(X + x) - f(X) - p(x). Items
// with a zero marginal are never bought; a zero utility gain on a positive
// marginal still counts as worth buying. Ties go to the lower item index.
inline ItemSet greedy_demand(const Valuation& f, const PriceVector& prices,
                             double budget = kUnlimitedBudget) {
  const int n = f.ground().size();
  auto tracker = f.make_tracker();
  double spent = 0.0;
  while (true) {
    int pick = -1;
    double pick_gain = 0.0;
    for (int x = 0; x < n; ++x) {
      if (tracker->current().contains(x)) continue;
      const double price = prices[x];
      if (!(price < kInfinitePrice) || spent + price > budget) continue;
      const double lift = tracker->gain(x);
      if (lift <= 0.0) continue;
      const double gain = lift - price;
      if (gain >= 0.0 && (pick < 0 || gain > pick_gain)) {
        pick = x;
        pick_gain = gain;
      }
    }
    if (pick < 0) break;
    spent += prices[pick];
    tracker->add(pick);
  }
  return tracker->current();
}

// Sell everything at the full-set marginals. Stable for monotone submodular
// valuations, and exactly the largest prefix the main solver considers.
inline PricingSolution sell_all(const Valuation& f) {
  return detail::solution_for_bundle(f, ItemSet::full(f.ground().size()));
}

// Price every item uniformly at random in [0, f(x)], then let the greedy
// buyer shop. No stability claim.
inline PricingSolution random_pricing(const Valuation& f, std::uint64_t seed) {
  const int n = f.ground().size();
  Rng rng(seed);
  const std::vector<double> single = singleton_values(f);
  PriceVector prices(n);
  for (int x = 0; x < n; ++x) prices[x] = rng.unit() * single[x];
  const ItemSet taken = greedy_demand(f, prices);
  PricingSolution sol;
  sol.prices = prices;
  sol.assignment = {taken};
  sol.profit = prices.sum(taken);
  sol.chosen_s = taken.size();
  return sol;
}

// Price every item at a fixed fraction of its singleton value and let the
// greedy buyer shop; the fraction is picked from {0.1, ..., 1.0} for the best
// revenue (ties keep the smallest fraction). No stability claim.
inline PricingSolution scaled_pricing(const Valuation& f) {
  const int n = f.ground().size();
  const std::vector<double> single = singleton_values(f);
  PricingSolution best;
  best.prices = PriceVector(n);
  best.assignment = {ItemSet(n)};
  for (int step = 1; step <= 10; ++step) {
    const double fraction = step / 10.0;
    PriceVector prices(n);
    for (int x = 0; x < n; ++x) prices[x] = fraction * single[x];
    const ItemSet taken = greedy_demand(f, prices);
    const double profit = prices.sum(taken);
    if (profit > best.profit) {
      best.prices = prices;
      best.assignment = {taken};
      best.profit = profit;
      best.chosen_s = taken.size();
    }
  }
  return best;
}

// Auction-style descent: start from the full set at within-set marginal
// prices, repeatedly drop the cheapest item (fixing its price at +infinity)
// and reprice. Returns the most profitable snapshot; ties keep the earliest,
// i.e. largest, set. Every snapshot is the stable pricing of its own set when
// f is monotone submodular.
inline PricingSolution ascending_pricing(const Valuation& f) {
  const int n = f.ground().size();
  ItemSet current = ItemSet::full(n);
  PricingSolution best = detail::solution_for_bundle(f, current);
  while (!current.empty()) {
    const std::vector<int> items = current.items();
    const std::vector<double> marg = f.marginals_within(current);
    double total = 0.0;
    for (double m : marg) total += m;
    if (total > best.profit) {
      best = detail::solution_for_bundle(f, current);
    }
    int drop = 0;
    for (std::size_t j = 1; j < items.size(); ++j) {
      if (marg[j] < marg[drop]) drop = static_cast<int>(j);
    }
    current.erase(items[drop]);
  }
  return best;
}

}  // namespace submod_pricing
