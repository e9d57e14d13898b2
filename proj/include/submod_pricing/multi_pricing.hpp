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
#include <limits>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "submod_pricing/errors.hpp"
#include "submod_pricing/item_set.hpp"
#include "submod_pricing/single_pricing.hpp"
#include "submod_pricing/solution.hpp"
#include "submod_pricing/valuation.hpp"

namespace submod_pricing {

struct Buyer {
  std::shared_ptr<const Valuation> valuation;
  double budget = kUnlimitedBudget;
};

// A pricing problem: one shared ground set and a list of buyers.
class Instance {
 public:
  explicit Instance(std::vector<Buyer> buyers) : buyers_(std::move(buyers)) {
    if (buyers_.empty()) throw InputError("instance: needs at least one buyer");
    for (const Buyer& b : buyers_) {
      if (!b.valuation) throw InputError("instance: null valuation");
      if (!(b.budget >= 0.0)) throw InputError("instance: negative budget");
    }
    ground_ = buyers_[0].valuation->ground_ptr();
    for (const Buyer& b : buyers_) {
      if (!(b.valuation->ground() == *ground_)) {
        throw InputError("instance: buyers disagree on the ground set");
      }
    }
  }

  const GroundSet& ground() const { return *ground_; }
  std::shared_ptr<const GroundSet> ground_ptr() const { return ground_; }
  int num_buyers() const { return static_cast<int>(buyers_.size()); }
  const Buyer& buyer(int i) const { return buyers_.at(i); }
  const std::vector<Buyer>& buyers() const { return buyers_; }

  bool all_budgets_unlimited() const {
    for (const Buyer& b : buyers_) {
      if (b.budget < kUnlimitedBudget) return false;
    }
    return true;
  }

 private:
  std::vector<Buyer> buyers_;
  std::shared_ptr<const GroundSet> ground_;
};

// Splits X among the buyers: each item goes to the lowest-index buyer whose
// within-X marginal matches the item's price. Such a buyer exists whenever
// the prices were set to the buyer-maximal marginals; `rel_tol` absorbs float
// drift when the prices come from elsewhere (e.g. a round-tripped file).
inline Assignment partition_assignment(const Instance& inst, const ItemSet& set,
                                       const PriceVector& prices,
                                       double rel_tol = 1e-9) {
  const int n = inst.ground().size();
  std::vector<std::vector<double>> marg(inst.num_buyers());
  for (int i = 0; i < inst.num_buyers(); ++i) {
    marg[i] = inst.buyer(i).valuation->marginals_within(set);
  }
  Assignment parts(inst.num_buyers(), ItemSet(n));
  const std::vector<int> items = set.items();
  for (std::size_t j = 0; j < items.size(); ++j) {
    const double price = prices[items[j]];
    const double tol = rel_tol * std::max(1.0, std::abs(price));
    int owner = -1;
    for (int i = 0; i < inst.num_buyers(); ++i) {
      if (std::abs(marg[i][j] - price) <= tol) {
        owner = i;
        break;
      }
    }
    if (owner < 0) {
      std::ostringstream msg;
      msg << "partition: no buyer attains price " << price << " for item '"
          << inst.ground().id(items[j]) << "' (marginals:";
      for (int i = 0; i < inst.num_buyers(); ++i) msg << ' ' << marg[i][j];
      msg << ')';
      throw InternalError(msg.str());
    }
    parts[owner].insert(items[j]);
  }
  return parts;
}

// Pricing for independent buyers with unlimited budgets. Ranks items by the
// best singleton value over buyers, prices each prefix at the buyer-maximal
// within-set marginal and splits the prefix among attaining buyers. The
// result is (1 - kappa(s))-stable with kappa(s) the largest buyer curvature
// at the chosen size s.
inline PricingSolution solve_multi(const Instance& inst) {
  if (!inst.all_budgets_unlimited()) {
    throw UnsupportedError(
        "independent-buyer solver supports unlimited budgets only");
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

  double best_profit = 0.0;
  int best_s = 0;
  ItemSet prefix(n);
  std::vector<std::vector<double>> marg(nb);
  for (int s = 1; s <= static_cast<int>(order.size()); ++s) {
    prefix.insert(order[s - 1]);
    for (int i = 0; i < nb; ++i) {
      marg[i] = inst.buyer(i).valuation->marginals_within(prefix);
    }
    double profit = 0.0;
    for (int j = 0; j < s; ++j) {
      double price = marg[0][j];
      for (int i = 1; i < nb; ++i) price = std::max(price, marg[i][j]);
      profit += price;
    }
    if (profit > best_profit) {
      best_profit = profit;
      best_s = s;
    }
  }

  ItemSet chosen(n);
  for (int j = 0; j < best_s; ++j) chosen.insert(order[j]);

  PricingSolution sol;
  sol.prices = PriceVector(n);
  for (int i = 0; i < nb; ++i) {
    marg[i] = inst.buyer(i).valuation->marginals_within(chosen);
  }
  const std::vector<int> items = chosen.items();
  for (std::size_t j = 0; j < items.size(); ++j) {
    double price = marg[0][j];
    for (int i = 1; i < nb; ++i) price = std::max(price, marg[i][j]);
    sol.prices[items[j]] = price;
  }
  sol.assignment = partition_assignment(inst, chosen, sol.prices);
  sol.profit = sol.prices.sum(chosen);
  sol.chosen_s = best_s;

  double kappa = 0.0;
  if (best_s >= 1) {
    for (int i = 0; i < nb; ++i) {
      kappa = std::max(kappa, inst.buyer(i).valuation->curvature_bound(best_s));
    }
  }
  sol.alpha = std::clamp(1.0 - kappa, 0.0, 1.0);
  return sol;
}

}  // namespace submod_pricing
