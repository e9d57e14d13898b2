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

#include <limits>
#include <vector>

#include "submod_pricing/errors.hpp"
#include "submod_pricing/item_set.hpp"

namespace submod_pricing {

inline constexpr double kInfinitePrice = std::numeric_limits<double>::infinity();
inline constexpr double kUnlimitedBudget = std::numeric_limits<double>::infinity();

// Per-item prices; +infinity marks an item the seller refuses to sell.
class PriceVector {
 public:
  PriceVector() = default;
  explicit PriceVector(int universe, double initial = kInfinitePrice)
      : prices_(universe, initial) {
    if (universe < 0) throw InputError("price vector: negative universe");
  }

  int universe() const { return static_cast<int>(prices_.size()); }
  double operator[](int i) const { return prices_.at(i); }
  double& operator[](int i) { return prices_.at(i); }

  // p(X), summed in ascending item order; infinite prices propagate.
  double sum(const ItemSet& set) const {
    if (set.universe() != universe()) {
      throw InputError("price vector: item set over a different universe");
    }
    double total = 0.0;
    set.for_each([&](int i) { total += prices_[i]; });
    return total;
  }

  bool all_finite_on(const ItemSet& set) const {
    bool ok = true;
    set.for_each([&](int i) { ok = ok && prices_[i] < kInfinitePrice; });
    return ok;
  }

  friend bool operator==(const PriceVector& a, const PriceVector& b) {
    return a.prices_ == b.prices_;
  }

 private:
  std::vector<double> prices_;
};

// One item set per buyer; parts must be pairwise disjoint.
using Assignment = std::vector<ItemSet>;

inline void validate_assignment(const Assignment& parts, int universe) {
  ItemSet seen(universe);
  for (const ItemSet& part : parts) {
    if (part.universe() != universe) {
      throw InputError("assignment: part over a different universe");
    }
    if (part.intersects(seen)) {
      throw InputError("assignment: parts are not disjoint");
    }
    seen = seen.union_with(part);
  }
}

// Output of every solver and baseline: prices, the assignment (a single part
// for one buyer or a collaborating pool, one part per buyer otherwise), the
// seller's profit, the winning assignment size, and the stability level the
// construction certifies (1 = fully stable, NaN = not certified).
struct PricingSolution {
  PriceVector prices;
  Assignment assignment;
  double profit = 0.0;
  int chosen_s = 0;
  double alpha = std::numeric_limits<double>::quiet_NaN();

  ItemSet assigned_union() const {
    ItemSet all(prices.universe());
    for (const ItemSet& part : assignment) all = all.union_with(part);
    return all;
  }
};

}  // namespace submod_pricing
