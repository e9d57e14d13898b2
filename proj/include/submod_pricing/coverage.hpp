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
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "submod_pricing/errors.hpp"
#include "submod_pricing/item_set.hpp"
#include "submod_pricing/valuation.hpp"

namespace submod_pricing {

// Expected revenue from customers activated through a bipartite network of
// marketing channels (the items) and customers. A channel x activates
// customer w independently with probability q(x, w), so
//
//   f(X) = gamma * sum_w (1 - prod_{x in X, (x,w) in E} (1 - q(x, w))).
//
// Products run in ascending channel order and the outer sum in ascending
// customer order, so evaluation is bit-reproducible.
class CoverageValuation final : public Valuation {
 public:
  struct Edge {
    int channel = 0;
    int customer = 0;
    double probability = 0.0;
  };

  CoverageValuation(std::shared_ptr<const GroundSet> channels,
                    std::vector<std::string> customers,
                    const std::vector<Edge>& edges, double revenue_per_customer)
      : Valuation(std::move(channels)),
        customers_(std::move(customers)),
        gamma_(revenue_per_customer),
        by_customer_(customers_.size()),
        by_channel_(ground().size()) {
    if (!(gamma_ >= 0.0)) {
      throw InputError("coverage: revenue per customer must be >= 0");
    }
    for (const Edge& e : edges) {
      if (e.channel < 0 || e.channel >= ground().size()) {
        throw InputError("coverage: edge references unknown channel");
      }
      if (e.customer < 0 || e.customer >= num_customers()) {
        throw InputError("coverage: edge references unknown customer");
      }
      if (!(e.probability >= 0.0 && e.probability <= 1.0)) {
        throw InputError("coverage: probability outside [0, 1]");
      }
      by_customer_[e.customer].push_back({e.channel, e.probability});
      by_channel_[e.channel].push_back({e.customer, e.probability});
    }
    for (auto& adj : by_customer_) {
      std::sort(adj.begin(), adj.end());
      for (std::size_t k = 1; k < adj.size(); ++k) {
        if (adj[k].first == adj[k - 1].first) {
          throw InputError("coverage: duplicate channel-customer edge");
        }
      }
    }
    for (auto& adj : by_channel_) std::sort(adj.begin(), adj.end());
  }

  // Convenience form with edges given by ids.
  static std::shared_ptr<CoverageValuation> with_named_edges(
      std::shared_ptr<const GroundSet> channels,
      std::vector<std::string> customers,
      const std::vector<std::tuple<std::string, std::string, double>>& edges,
      double revenue_per_customer) {
    std::vector<Edge> indexed;
    indexed.reserve(edges.size());
    for (const auto& [ch, cu, q] : edges) {
      auto it = std::find(customers.begin(), customers.end(), cu);
      if (it == customers.end()) {
        throw InputError("coverage: unknown customer '" + cu + "'");
      }
      indexed.push_back({channels->index_of(ch),
                         static_cast<int>(it - customers.begin()), q});
    }
    return std::make_shared<CoverageValuation>(
        channels, std::move(customers), indexed, revenue_per_customer);
  }

  int num_customers() const { return static_cast<int>(customers_.size()); }
  const std::vector<std::string>& customers() const { return customers_; }
  double revenue_per_customer() const { return gamma_; }

  int num_edges() const {
    int n = 0;
    for (const auto& adj : by_customer_) n += static_cast<int>(adj.size());
    return n;
  }

  double max_probability() const {
    double q = 0.0;
    for (const auto& adj : by_customer_) {
      for (const auto& [ch, p] : adj) q = std::max(q, p);
    }
    return q;
  }

  int max_customer_degree() const {
    std::size_t d = 0;
    for (const auto& adj : by_customer_) d = std::max(d, adj.size());
    return static_cast<int>(d);
  }

  // (channel, q) pairs incident to `customer`, ascending by channel.
  const std::vector<std::pair<int, double>>& customer_edges(int customer) const {
    return by_customer_.at(customer);
  }

  // (customer, q) pairs incident to `channel`, ascending by customer.
  const std::vector<std::pair<int, double>>& channel_edges(int channel) const {
    return by_channel_.at(channel);
  }

  bool submodular_hint() const override { return true; }

  // All within-set marginals in one sweep: for each customer, prefix/suffix
  // products of (1 - q) over the members of X give the product excluding each
  // member in linear time.
  std::vector<double> marginals_within(const ItemSet& set) const override {
    if (set.universe() != ground().size()) {
      throw InputError("valuation: item set does not match the ground set");
    }
    const std::vector<int> items = set.items();
    std::vector<int> position(ground().size(), -1);
    for (int j = 0; j < static_cast<int>(items.size()); ++j) {
      position[items[j]] = j;
    }
    std::vector<double> marg(items.size(), 0.0);
    std::vector<std::pair<int, double>> members;  // (position in X, q)
    std::vector<double> prefix, suffix;
    for (int w = 0; w < num_customers(); ++w) {
      members.clear();
      for (const auto& [ch, q] : by_customer_[w]) {
        if (position[ch] >= 0) members.push_back({position[ch], q});
      }
      if (members.empty()) continue;
      const std::size_t k = members.size();
      prefix.assign(k + 1, 1.0);
      suffix.assign(k + 1, 1.0);
      for (std::size_t j = 0; j < k; ++j) {
        prefix[j + 1] = prefix[j] * (1.0 - members[j].second);
      }
      for (std::size_t j = k; j-- > 0;) {
        suffix[j] = suffix[j + 1] * (1.0 - members[j].second);
      }
      for (std::size_t j = 0; j < k; ++j) {
        marg[members[j].first] += members[j].second * prefix[j] * suffix[j + 1];
      }
    }
    for (double& m : marg) m *= gamma_;
    return marg;
  }

  std::unique_ptr<MarginalTracker> make_tracker() const override;

  double curvature_bound(int s) const override;

 protected:
  double value_impl(const ItemSet& set) const override {
    double total = 0.0;
    for (int w = 0; w < num_customers(); ++w) {
      double miss = 1.0;
      for (const auto& [ch, q] : by_customer_[w]) {
        if (set.contains(ch)) miss *= 1.0 - q;
      }
      total += 1.0 - miss;
    }
    return gamma_ * total;
  }

 private:
  std::vector<std::string> customers_;
  double gamma_;
  std::vector<std::vector<std::pair<int, double>>> by_customer_;
  std::vector<std::vector<std::pair<int, double>>> by_channel_;
};

// Closed-form curvature bound for coverage valuations:
//   kappa(s) <= 1 - (1 - q)^(min(s, d) - 1)
// with q the largest edge probability and d the largest customer degree.
inline double curvature_upper_bound(const CoverageValuation& f, int s) {
  const int n = f.ground().size();
  if (s < 1 || s > n) {
    throw InputError("curvature bound: size " + std::to_string(s) +
                     " outside 1.." + std::to_string(n));
  }
  const int exponent = std::min(s, f.max_customer_degree()) - 1;
  if (exponent <= 0) return 0.0;
  return 1.0 - std::pow(1.0 - f.max_probability(), exponent);
}

inline double CoverageValuation::curvature_bound(int s) const {
  return curvature_upper_bound(*this, s);
}

inline CurvatureProfile coverage_curvature_profile(const CoverageValuation& f) {
  CurvatureProfile profile;
  profile.kind = CurvatureProfile::Kind::kUpperBound;
  const int n = f.ground().size();
  profile.kappa.reserve(n);
  for (int s = 1; s <= n; ++s) {
    profile.kappa.push_back(curvature_upper_bound(f, s));
  }
  return profile;
}

namespace detail {

class CoverageTracker final : public MarginalTracker {
 public:
  explicit CoverageTracker(const CoverageValuation& f)
      : f_(f),
        current_(f.ground().size()),
        miss_(f.num_customers(), 1.0) {}

  double gain(int item) const override {
    if (current_.contains(item)) return 0.0;
    double g = 0.0;
    for (const auto& [w, q] : f_.channel_edges(item)) g += miss_[w] * q;
    return f_.revenue_per_customer() * g;
  }

  void add(int item) override {
    if (current_.contains(item)) return;
    value_ += gain(item);
    for (const auto& [w, q] : f_.channel_edges(item)) miss_[w] *= 1.0 - q;
    current_.insert(item);
  }

  double value() const override { return value_; }
  const ItemSet& current() const override { return current_; }

 private:
  const CoverageValuation& f_;
  ItemSet current_;
  std::vector<double> miss_;  // per customer, prod of (1 - q) over current set
  double value_ = 0.0;
};

}  // namespace detail

inline std::unique_ptr<MarginalTracker> CoverageValuation::make_tracker() const {
  return std::make_unique<detail::CoverageTracker>(*this);
}

}  // namespace submod_pricing
