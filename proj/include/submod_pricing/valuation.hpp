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
#include <cstdint>
#include <limits>
#include <memory>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "submod_pricing/errors.hpp"
#include "submod_pricing/item_set.hpp"

namespace submod_pricing {

// Enumerative routines refuse beyond these sizes instead of silently hanging.
inline constexpr int kExplicitTableMaxItems = 24;
inline constexpr int kBruteForceMaxItems = 20;
inline constexpr int kExactCurvatureMaxItems = 24;

// Incremental evaluator for one growing set. Used by greedy-style algorithms
// that probe many single-item extensions of the current set.
class MarginalTracker {
 public:
  virtual ~MarginalTracker() = default;

  // f(X + item) - f(X) for the current set X. `item` may or may not be in X;
  // for item in X the gain is 0 for any monotone submodular valuation.
  virtual double gain(int item) const = 0;
  virtual void add(int item) = 0;
  virtual double value() const = 0;
  virtual const ItemSet& current() const = 0;
};

// A set function f over a ground set with f(empty) = 0. Implementations are
// immutable after construction; evaluation is pure and thread-safe.
class Valuation {
 public:
  explicit Valuation(std::shared_ptr<const GroundSet> ground)
      : ground_(std::move(ground)) {
    if (!ground_) throw InputError("valuation: null ground set");
  }
  virtual ~Valuation() = default;

  const GroundSet& ground() const { return *ground_; }
  std::shared_ptr<const GroundSet> ground_ptr() const { return ground_; }

  double value(const ItemSet& set) const {
    if (set.universe() != ground().size()) {
      throw InputError("valuation: item set does not match the ground set");
    }
    return value_impl(set);
  }

  // f(X) - f(X \ x) for every x in X, in ascending item order (aligned with
  // ItemSet::items()). Overridden where a faster batched form exists.
  virtual std::vector<double> marginals_within(const ItemSet& set) const {
    const double whole = value(set);
    std::vector<double> out;
    out.reserve(set.size());
    set.for_each([&](int x) { out.push_back(whole - value(set.without(x))); });
    return out;
  }

  virtual std::unique_ptr<MarginalTracker> make_tracker() const;

  // Whether the concrete form guarantees (or asserts) monotone submodularity.
  virtual bool submodular_hint() const = 0;

  // A certified upper bound on the curvature at set size s, in [0, 1].
  // The default computes the exact value when the ground set is small and
  // otherwise falls back to the trivial bound 1.
  virtual double curvature_bound(int s) const;

 protected:
  virtual double value_impl(const ItemSet& set) const = 0;

 private:
  std::shared_ptr<const GroundSet> ground_;
};

inline double evaluate(const Valuation& f, const ItemSet& set) {
  return f.value(set);
}

// f(X) - f(X \ x); requires x in X.
inline double marginal(const Valuation& f, const ItemSet& set, int item) {
  if (!set.contains(item)) {
    throw InputError("marginal: item " + std::to_string(item) +
                     " is not in the set");
  }
  return f.value(set) - f.value(set.without(item));
}

// h(X) = sum over x in X of f(X) - f(X \ x): the seller's revenue when X is
// sold at the per-item marginal prices that keep the buyer indifferent.
inline double profit_potential(const Valuation& f, const ItemSet& set) {
  const std::vector<double> marg = f.marginals_within(set);
  double total = 0.0;
  for (double m : marg) total += m;
  return total;
}

inline std::vector<double> singleton_values(const Valuation& f) {
  const int n = f.ground().size();
  std::vector<double> out(n);
  ItemSet s(n);
  for (int i = 0; i < n; ++i) {
    s.insert(i);
    out[i] = f.value(s);
    s.erase(i);
  }
  return out;
}

namespace detail {

// base^exp, saturating at cap + 1 instead of overflowing.
inline std::uint64_t checked_pow(std::uint64_t base, int exp,
                                 std::uint64_t cap) {
  std::uint64_t v = 1;
  for (int i = 0; i < exp; ++i) {
    if (base != 0 && v > cap / base) return cap + 1;
    v *= base;
  }
  return v;
}

// Visits all size-s subsets of {0..n-1} in lexicographic order.
template <class Fn>
void for_each_combination(int n, int s, Fn&& fn) {
  std::vector<int> comb(s);
  std::iota(comb.begin(), comb.end(), 0);
  while (true) {
    fn(comb);
    int i = s - 1;
    while (i >= 0 && comb[i] == n - s + i) --i;
    if (i < 0) break;
    ++comb[i];
    for (int j = i + 1; j < s; ++j) comb[j] = comb[j - 1] + 1;
  }
}

}  // namespace detail

// The curvature at size s: one minus the worst ratio of a size-s marginal to
// the corresponding singleton value, floored at zero. Items with f(x) = 0 are
// skipped (their ratio is 0/0); if every term is skipped the result is 0.
// Enumerates all size-s subsets, so only suitable for small ground sets.
inline double exact_curvature(const Valuation& f, int s) {
  const int n = f.ground().size();
  if (s < 1 || s > n) {
    throw InputError("curvature: size " + std::to_string(s) +
                     " outside 1.." + std::to_string(n));
  }
  if (n > kExactCurvatureMaxItems) {
    throw CapacityError("curvature: exact computation needs <= " +
                        std::to_string(kExactCurvatureMaxItems) + " items");
  }
  const std::vector<double> single = singleton_values(f);
  double min_ratio = std::numeric_limits<double>::infinity();
  detail::for_each_combination(n, s, [&](const std::vector<int>& comb) {
    ItemSet set(n);
    for (int i : comb) set.insert(i);
    const std::vector<double> marg = f.marginals_within(set);
    for (int j = 0; j < s; ++j) {
      if (single[comb[j]] > 0.0) {
        const double ratio = marg[j] / single[comb[j]];
        if (ratio < min_ratio) min_ratio = ratio;
      }
    }
  });
  if (!std::isfinite(min_ratio)) return 0.0;
  return std::max(0.0, 1.0 - min_ratio);
}

struct CurvatureProfile {
  enum class Kind { kExact, kUpperBound };
  std::vector<double> kappa;  // kappa[s-1] is the value at size s
  Kind kind = Kind::kExact;
};

inline CurvatureProfile exact_curvature_profile(const Valuation& f) {
  CurvatureProfile profile;
  profile.kind = CurvatureProfile::Kind::kExact;
  const int n = f.ground().size();
  profile.kappa.reserve(n);
  for (int s = 1; s <= n; ++s) profile.kappa.push_back(exact_curvature(f, s));
  return profile;
}

// A valuation given by a complete table over all subsets, keyed by the bitmask
// of item indices. Carrier for small hand-built and adversarial instances.
class ExplicitValuation final : public Valuation {
 public:
  ExplicitValuation(std::shared_ptr<const GroundSet> ground,
                    std::vector<double> table, bool submodular)
      : Valuation(std::move(ground)),
        table_(std::move(table)),
        submodular_(submodular) {
    const int n = this->ground().size();
    if (n > kExplicitTableMaxItems) {
      throw CapacityError("explicit valuation: needs <= " +
                          std::to_string(kExplicitTableMaxItems) + " items");
    }
    if (table_.size() != (std::size_t{1} << n)) {
      throw InputError("explicit valuation: table must have 2^|V| entries");
    }
    if (table_[0] != 0.0) {
      throw InputError("explicit valuation: value of the empty set must be 0");
    }
  }

  template <class Fn>
  static std::shared_ptr<ExplicitValuation> from_function(
      std::shared_ptr<const GroundSet> ground, Fn&& fn, bool submodular) {
    const int n = ground->size();
    if (n > kExplicitTableMaxItems) {
      throw CapacityError("explicit valuation: needs <= " +
                          std::to_string(kExplicitTableMaxItems) + " items");
    }
    std::vector<double> table(std::size_t{1} << n);
    for (std::uint64_t mask = 0; mask < table.size(); ++mask) {
      table[mask] = fn(mask);
    }
    return std::make_shared<ExplicitValuation>(std::move(ground),
                                               std::move(table), submodular);
  }

  double table_at(std::uint64_t mask) const { return table_[mask]; }
  const std::vector<double>& table() const { return table_; }
  bool submodular_hint() const override { return submodular_; }

 protected:
  double value_impl(const ItemSet& set) const override {
    return table_[set.mask64()];
  }

 private:
  std::vector<double> table_;
  bool submodular_;
};

namespace detail {

class GenericTracker final : public MarginalTracker {
 public:
  explicit GenericTracker(const Valuation& f)
      : f_(f), current_(f.ground().size()) {}

  double gain(int item) const override {
    if (current_.contains(item)) return 0.0;
    return f_.value(current_.with(item)) - value_;
  }

  void add(int item) override {
    if (current_.contains(item)) return;
    current_.insert(item);
    value_ = f_.value(current_);
  }

  double value() const override { return value_; }
  const ItemSet& current() const override { return current_; }

 private:
  const Valuation& f_;
  ItemSet current_;
  double value_ = 0.0;
};

}  // namespace detail

inline std::unique_ptr<MarginalTracker> Valuation::make_tracker() const {
  return std::make_unique<detail::GenericTracker>(*this);
}

inline double Valuation::curvature_bound(int s) const {
  if (ground().size() <= 16) {
    return std::min(1.0, exact_curvature(*this, s));
  }
  return 1.0;
}

// Materializes any small valuation into an explicit table.
inline std::shared_ptr<ExplicitValuation> tabulate(const Valuation& f) {
  const int n = f.ground().size();
  if (n > kBruteForceMaxItems) {
    throw CapacityError("tabulate: needs <= " +
                        std::to_string(kBruteForceMaxItems) + " items");
  }
  return ExplicitValuation::from_function(
      f.ground_ptr(),
      [&](std::uint64_t mask) { return f.value(ItemSet::from_mask(n, mask)); },
      f.submodular_hint());
}

}  // namespace submod_pricing
