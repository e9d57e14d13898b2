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
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "submod_pricing/errors.hpp"
#include "submod_pricing/item_set.hpp"
#include "submod_pricing/multi_pricing.hpp"
#include "submod_pricing/solution.hpp"
#include "submod_pricing/valuation.hpp"

namespace submod_pricing {

inline constexpr int kEnumerationMaxItems = 14;
inline constexpr double kCheckRelTol = 1e-9;

namespace detail {

inline void require_enumerable(int n, const char* what) {
  if (n > kEnumerationMaxItems) {
    throw CapacityError(std::string(what) + ": needs <= " +
                        std::to_string(kEnumerationMaxItems) + " items");
  }
}

inline std::vector<double> value_table(const Valuation& f) {
  const int n = f.ground().size();
  std::vector<double> table(std::size_t{1} << n);
  for (std::uint64_t mask = 0; mask < table.size(); ++mask) {
    table[mask] = f.value(ItemSet::from_mask(n, mask));
  }
  return table;
}

}  // namespace detail

struct SubmodularityReport {
  bool monotone = true;
  bool submodular = true;
  // First violations found, as witness sets.
  std::optional<std::pair<ItemSet, int>> monotonicity_witness;  // (X, added x)
  std::optional<std::pair<ItemSet, ItemSet>> submodularity_witness;  // (X, Y)

  bool pass() const { return monotone && submodular; }
};

// Exhaustive check of monotonicity and submodularity over all subsets, via
// the local lattice conditions (equivalent to the pairwise definition):
//   f(S) <= f(S + x)                          for all S, x not in S
//   f(S+x) + f(S+y) >= f(S+x+y) + f(S)        for all S, x < y not in S
// The submodularity witness is reported as the pair (S+x, S+y). `rel_tol`
// absorbs evaluation rounding; genuine violations are far larger.
inline SubmodularityReport check_monotone_submodular(
    const Valuation& f, double rel_tol = kCheckRelTol) {
  const int n = f.ground().size();
  detail::require_enumerable(n, "submodularity check");
  const std::vector<double> table = detail::value_table(f);
  SubmodularityReport report;
  const std::uint64_t limit = std::uint64_t{1} << n;
  for (std::uint64_t s = 0; s < limit && report.monotone; ++s) {
    for (int x = 0; x < n; ++x) {
      const std::uint64_t bx = std::uint64_t{1} << x;
      if (s & bx) continue;
      const double tol = rel_tol * std::max(1.0, std::abs(table[s]));
      if (table[s | bx] < table[s] - tol) {
        report.monotone = false;
        report.monotonicity_witness = {ItemSet::from_mask(n, s), x};
        break;
      }
    }
  }
  for (std::uint64_t s = 0; s < limit && report.submodular; ++s) {
    for (int x = 0; x < n && report.submodular; ++x) {
      const std::uint64_t bx = std::uint64_t{1} << x;
      if (s & bx) continue;
      for (int y = x + 1; y < n; ++y) {
        const std::uint64_t by = std::uint64_t{1} << y;
        if (s & by) continue;
        const double lhs = table[s | bx] + table[s | by];
        const double rhs = table[s | bx | by] + table[s];
        const double tol = rel_tol * std::max({1.0, std::abs(lhs), std::abs(rhs)});
        if (lhs < rhs - tol) {
          report.submodular = false;
          report.submodularity_witness = {ItemSet::from_mask(n, s | bx),
                                          ItemSet::from_mask(n, s | by)};
          break;
        }
      }
    }
  }
  return report;
}

struct Deviation {
  int buyer = -1;
  ItemSet bundle;
  double utility_gain = 0.0;
};

struct StabilityReport {
  bool stable = true;
  double alpha = 1.0;
  std::optional<Deviation> worst_deviation;  // largest utility gain found
};

// Enumerates every affordable deviation of every buyer. `alpha` is the
// largest discount level at which no deviation is profitable:
//   min over buyers i and bundles Y with f_i(Y) > 0 of
//       (f_i(X_i) - p(X_i) + p(Y)) / f_i(Y),
// capped at 1; bundles with f_i(Y) <= 0 impose no constraint on alpha but do
// count against exact stability.
inline StabilityReport check_stable(const Instance& inst,
                                    const PriceVector& prices,
                                    const Assignment& assignment,
                                    double rel_tol = kCheckRelTol) {
  const int n = inst.ground().size();
  detail::require_enumerable(n, "stability check");
  if (static_cast<int>(assignment.size()) != inst.num_buyers()) {
    throw InputError("stability check: one bundle per buyer expected");
  }
  validate_assignment(assignment, n);

  StabilityReport report;
  const std::uint64_t limit = std::uint64_t{1} << n;
  for (int i = 0; i < inst.num_buyers(); ++i) {
    const Valuation& f = *inst.buyer(i).valuation;
    const double budget = inst.buyer(i).budget;
    const double budget_tol =
        budget < kUnlimitedBudget ? rel_tol * std::max(1.0, budget) : 0.0;
    const double own_value = f.value(assignment[i]);
    const double own_price = prices.sum(assignment[i]);
    if (own_price > budget + budget_tol) {
      report.stable = false;
      report.alpha = 0.0;
      report.worst_deviation =
          Deviation{i, assignment[i], std::numeric_limits<double>::infinity()};
      return report;
    }
    const double own_utility = own_value - own_price;
    for (std::uint64_t mask = 0; mask < limit; ++mask) {
      const ItemSet bundle = ItemSet::from_mask(n, mask);
      const double price = prices.sum(bundle);
      if (price > budget + budget_tol) continue;
      const double value = f.value(bundle);
      const double utility = value - price;
      const double gain = utility - own_utility;
      if (gain > rel_tol * std::max(1.0, std::abs(own_utility))) {
        report.stable = false;
        if (!report.worst_deviation ||
            gain > report.worst_deviation->utility_gain) {
          report.worst_deviation = Deviation{i, bundle, gain};
        }
      }
      if (value > 0.0) {
        const double level = (own_utility + price) / value;
        report.alpha = std::min(report.alpha, level);
      }
    }
  }
  return report;
}

// Single-buyer convenience overload.
inline StabilityReport check_stable(std::shared_ptr<const Valuation> f,
                                    const PriceVector& prices,
                                    const ItemSet& bundle,
                                    double budget = kUnlimitedBudget,
                                    double rel_tol = kCheckRelTol) {
  Instance inst({Buyer{std::move(f), budget}});
  return check_stable(inst, prices, {bundle}, rel_tol);
}

// max_X f(X) divided by max_X h(X): how much of the achievable welfare the
// seller can actually extract with stable prices. +infinity when no bundle
// has positive profit potential.
inline double welfare_profit_gap(const Valuation& f) {
  const int n = f.ground().size();
  detail::require_enumerable(n, "welfare-profit gap");
  double best_value = 0.0;
  double best_h = 0.0;
  const std::uint64_t limit = std::uint64_t{1} << n;
  for (std::uint64_t mask = 0; mask < limit; ++mask) {
    const ItemSet set = ItemSet::from_mask(n, mask);
    best_value = std::max(best_value, f.value(set));
    best_h = std::max(best_h, profit_potential(f, set));
  }
  if (best_h <= 0.0) return std::numeric_limits<double>::infinity();
  return best_value / best_h;
}

namespace detail {

// Dense two-phase simplex for the tiny pricing polytopes built below.
// Maximizes c.x subject to a.x <= b (row-wise) and x >= 0. Returns nullopt
// when infeasible; callers guarantee boundedness.
class Simplex {
 public:
  static std::optional<std::vector<double>> maximize(
      const std::vector<std::vector<double>>& a, const std::vector<double>& b,
      const std::vector<double>& c) {
    Simplex lp(a, b, c);
    return lp.run();
  }

 private:
  static constexpr double kEps = 1e-9;

  Simplex(const std::vector<std::vector<double>>& a,
          const std::vector<double>& b, const std::vector<double>& c)
      : num_vars_(static_cast<int>(c.size())),
        num_rows_(static_cast<int>(a.size())),
        objective_(c) {
    // Columns: x (num_vars), slack per row, artificial per negative row, rhs.
    int artificials = 0;
    for (double bi : b) {
      if (bi < 0.0) ++artificials;
    }
    num_cols_ = num_vars_ + num_rows_ + artificials;
    rows_.assign(num_rows_, std::vector<double>(num_cols_ + 1, 0.0));
    basis_.assign(num_rows_, -1);
    first_artificial_ = num_vars_ + num_rows_;
    int next_artificial = first_artificial_;
    for (int i = 0; i < num_rows_; ++i) {
      const double sign = b[i] < 0.0 ? -1.0 : 1.0;
      for (int j = 0; j < num_vars_; ++j) rows_[i][j] = sign * a[i][j];
      rows_[i][num_vars_ + i] = sign;  // slack
      rows_[i][num_cols_] = sign * b[i];
      if (b[i] < 0.0) {
        rows_[i][next_artificial] = 1.0;
        basis_[i] = next_artificial++;
      } else {
        basis_[i] = num_vars_ + i;
      }
    }
  }

  std::optional<std::vector<double>> run() {
    if (first_artificial_ < num_cols_) {
      // Phase 1: drive the artificial variables to zero.
      std::vector<double> phase1(num_cols_, 0.0);
      for (int j = first_artificial_; j < num_cols_; ++j) phase1[j] = -1.0;
      const double feasibility = iterate(phase1, /*allow_artificial=*/true);
      if (feasibility < -1e-7) return std::nullopt;
    }
    std::vector<double> phase2(num_cols_, 0.0);
    for (int j = 0; j < num_vars_; ++j) phase2[j] = objective_[j];
    iterate(phase2, /*allow_artificial=*/false);
    std::vector<double> x(num_vars_, 0.0);
    for (int i = 0; i < num_rows_; ++i) {
      if (basis_[i] < num_vars_) x[basis_[i]] = rows_[i][num_cols_];
    }
    return x;
  }

  // Runs simplex pivots (Bland's rule) for the given objective; returns the
  // objective value reached.
  double iterate(const std::vector<double>& cost, bool allow_artificial) {
    std::vector<double> obj(num_cols_ + 1, 0.0);
    for (int j = 0; j < num_cols_; ++j) obj[j] = -cost[j];
    for (int i = 0; i < num_rows_; ++i) {
      const double basic_cost = cost[basis_[i]];
      if (basic_cost != 0.0) {
        for (int j = 0; j <= num_cols_; ++j) {
          obj[j] += basic_cost * rows_[i][j];
        }
        obj[basis_[i]] = 0.0;
      }
    }
    while (true) {
      int enter = -1;
      const int scan_limit = allow_artificial ? num_cols_ : first_artificial_;
      for (int j = 0; j < scan_limit; ++j) {
        if (obj[j] < -kEps) {
          enter = j;
          break;  // Bland: smallest improving index
        }
      }
      if (enter < 0) break;
      int leave = -1;
      double best_ratio = 0.0;
      for (int i = 0; i < num_rows_; ++i) {
        if (rows_[i][enter] > kEps) {
          const double ratio = rows_[i][num_cols_] / rows_[i][enter];
          if (leave < 0 || ratio < best_ratio - kEps ||
              (ratio < best_ratio + kEps && basis_[i] < basis_[leave])) {
            leave = i;
            best_ratio = ratio;
          }
        }
      }
      if (leave < 0) break;  // unbounded direction; callers preclude this
      pivot(leave, enter, obj);
    }
    return obj[num_cols_];
  }

  void pivot(int row, int col, std::vector<double>& obj) {
    const double inv = 1.0 / rows_[row][col];
    for (double& v : rows_[row]) v *= inv;
    rows_[row][col] = 1.0;
    for (int i = 0; i < num_rows_; ++i) {
      if (i == row) continue;
      const double factor = rows_[i][col];
      if (factor == 0.0) continue;
      for (int j = 0; j <= num_cols_; ++j) {
        rows_[i][j] -= factor * rows_[row][j];
      }
      rows_[i][col] = 0.0;
    }
    const double factor = obj[col];
    if (factor != 0.0) {
      for (int j = 0; j <= num_cols_; ++j) obj[j] -= factor * rows_[row][j];
      obj[col] = 0.0;
    }
    basis_[row] = col;
  }

  int num_vars_;
  int num_rows_;
  int num_cols_ = 0;
  int first_artificial_ = 0;
  std::vector<double> objective_;
  std::vector<std::vector<double>> rows_;
  std::vector<int> basis_;
};

// Most profitable stable prices for a fixed assignment, or nullopt when no
// stable prices exist. Maximizes sum of prices over the assigned items
// subject to every buyer preferring their own bundle to every alternative.
inline std::optional<PriceVector> best_stable_prices(const Instance& inst,
                                                     const Assignment& parts) {
  const int n = inst.ground().size();
  ItemSet assigned(n);
  for (const ItemSet& part : parts) assigned = assigned.union_with(part);
  const std::vector<int> items = assigned.items();
  const int k = static_cast<int>(items.size());
  std::vector<int> column(n, -1);
  for (int j = 0; j < k; ++j) column[items[j]] = j;

  std::vector<std::vector<double>> a;
  std::vector<double> b;
  for (int i = 0; i < inst.num_buyers(); ++i) {
    const Valuation& f = *inst.buyer(i).valuation;
    const double own_value = f.value(parts[i]);
    std::vector<double> own_coeff(k, 0.0);
    parts[i].for_each([&](int x) { own_coeff[column[x]] = 1.0; });
    const std::uint64_t limit = std::uint64_t{1} << k;
    for (std::uint64_t mask = 0; mask < limit; ++mask) {
      // Constraint: p(X_i) - p(Y) <= f_i(X_i) - f_i(Y).
      ItemSet bundle(n);
      for (int j = 0; j < k; ++j) {
        if ((mask >> j) & 1) bundle.insert(items[j]);
      }
      std::vector<double> row = own_coeff;
      for (int j = 0; j < k; ++j) {
        if ((mask >> j) & 1) row[j] -= 1.0;
      }
      a.push_back(std::move(row));
      b.push_back(own_value - f.value(bundle));
    }
  }
  const auto solution = Simplex::maximize(a, b, std::vector<double>(k, 1.0));
  if (!solution) return std::nullopt;
  PriceVector prices(n);
  for (int j = 0; j < k; ++j) prices[items[j]] = std::max(0.0, (*solution)[j]);
  return prices;
}

}  // namespace detail

// Exact benchmark for the independent-buyer problem on tiny instances:
// enumerates every assignment of items to buyers (or to nobody) and, for
// each, the most profitable stable prices via a small LP; every candidate is
// re-verified by enumeration before being accepted, so the returned profit is
// a certified stable optimum.
inline PricingSolution exhaustive_multi_opt(const Instance& inst) {
  const int n = inst.ground().size();
  const int nb = inst.num_buyers();
  if (n > 6 || nb > 2) {
    throw CapacityError("exhaustive benchmark: needs <= 6 items, <= 2 buyers");
  }
  if (!inst.all_budgets_unlimited()) {
    throw UnsupportedError("exhaustive benchmark assumes unlimited budgets");
  }

  PricingSolution best;
  best.prices = PriceVector(n);
  best.assignment = Assignment(nb, ItemSet(n));
  best.alpha = 1.0;

  std::vector<int> digit(n, 0);  // 0 = unassigned, i = buyer i-1
  while (true) {
    Assignment parts(nb, ItemSet(n));
    for (int x = 0; x < n; ++x) {
      if (digit[x] > 0) parts[digit[x] - 1].insert(x);
    }

    const auto try_prices = [&](const PriceVector& prices) -> bool {
      if (!check_stable(inst, prices, parts).stable) return false;
      double profit = 0.0;
      for (int i = 0; i < nb; ++i) profit += prices.sum(parts[i]);
      if (profit > best.profit) {
        best.prices = prices;
        best.assignment = parts;
        best.profit = profit;
        best.chosen_s = 0;
        for (const ItemSet& part : parts) best.chosen_s += part.size();
      }
      return true;
    };

    // The per-buyer marginal prices dominate every stable price vector for
    // this assignment, so when they verify the LP cannot do better.
    PriceVector candidate(n);
    for (int i = 0; i < nb; ++i) {
      const std::vector<int> items = parts[i].items();
      const std::vector<double> marg =
          inst.buyer(i).valuation->marginals_within(parts[i]);
      for (std::size_t j = 0; j < items.size(); ++j) {
        candidate[items[j]] = marg[j];
      }
    }
    if (!try_prices(candidate)) {
      const auto lp_prices = detail::best_stable_prices(inst, parts);
      if (lp_prices) try_prices(*lp_prices);
    }

    int x = 0;
    while (x < n && digit[x] == nb) digit[x++] = 0;
    if (x == n) break;
    ++digit[x];
  }
  return best;
}

// Whether some assignment makes the given prices stable; used by the
// reduction fixtures. Returns the first such assignment in enumeration order.
inline std::optional<Assignment> exists_stable_assignment(
    const Instance& inst, const PriceVector& prices,
    double rel_tol = kCheckRelTol) {
  const int n = inst.ground().size();
  const int nb = inst.num_buyers();
  detail::require_enumerable(n, "stable-assignment search");
  if (detail::checked_pow(nb + 1, n, std::uint64_t{1} << 24) >
      (std::uint64_t{1} << 24)) {
    throw CapacityError("stable-assignment search: (n+1)^|V| too large");
  }

  // Best affordable utility per buyer, then scan assignments for one where
  // every buyer attains it.
  const std::uint64_t limit = std::uint64_t{1} << n;
  std::vector<std::vector<double>> utility(nb,
                                           std::vector<double>(limit, 0.0));
  std::vector<double> best_utility(nb, -std::numeric_limits<double>::infinity());
  for (int i = 0; i < nb; ++i) {
    const Valuation& f = *inst.buyer(i).valuation;
    const double budget = inst.buyer(i).budget;
    const double budget_tol =
        budget < kUnlimitedBudget ? rel_tol * std::max(1.0, budget) : 0.0;
    for (std::uint64_t mask = 0; mask < limit; ++mask) {
      const ItemSet bundle = ItemSet::from_mask(n, mask);
      const double price = prices.sum(bundle);
      utility[i][mask] = price > budget + budget_tol
                             ? -std::numeric_limits<double>::infinity()
                             : f.value(bundle) - price;
      best_utility[i] = std::max(best_utility[i], utility[i][mask]);
    }
  }

  std::vector<int> digit(n, 0);
  while (true) {
    std::vector<std::uint64_t> masks(nb, 0);
    for (int x = 0; x < n; ++x) {
      if (digit[x] > 0) masks[digit[x] - 1] |= std::uint64_t{1} << x;
    }
    bool all_happy = true;
    for (int i = 0; i < nb && all_happy; ++i) {
      const double tol = rel_tol * std::max(1.0, std::abs(best_utility[i]));
      all_happy = utility[i][masks[i]] >= best_utility[i] - tol;
    }
    if (all_happy) {
      Assignment parts;
      parts.reserve(nb);
      for (int i = 0; i < nb; ++i) {
        parts.push_back(ItemSet::from_mask(n, masks[i]));
      }
      return parts;
    }
    int x = 0;
    while (x < n && digit[x] == nb) digit[x++] = 0;
    if (x == n) break;
    ++digit[x];
  }
  return std::nullopt;
}

}  // namespace submod_pricing
