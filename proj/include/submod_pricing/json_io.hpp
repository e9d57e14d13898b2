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
#include <fstream>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "submod_pricing/collab_pricing.hpp"
#include "submod_pricing/coverage.hpp"
#include "submod_pricing/errors.hpp"
#include "submod_pricing/item_set.hpp"
#include "submod_pricing/multi_pricing.hpp"
#include "submod_pricing/solution.hpp"
#include "submod_pricing/valuation.hpp"
#include "submod_pricing/verify.hpp"

namespace submod_pricing {

using Json = nlohmann::json;

// Extended nonnegative reals serialize as a number or the string "inf".
inline Json extended_to_json(double v) {
  if (v >= kInfinitePrice) return Json("inf");
  return Json(v);
}

inline double extended_from_json(const Json& j, const char* what) {
  if (j.is_string()) {
    if (j.get<std::string>() == "inf") return kInfinitePrice;
    throw InputError(std::string(what) + ": expected a number or \"inf\"");
  }
  if (!j.is_number()) {
    throw InputError(std::string(what) + ": expected a number or \"inf\"");
  }
  return j.get<double>();
}

// ---------------------------------------------------------------------------
// Valuations
//
//   {"type": "coverage", "channels": [...], "customers": [...],
//    "edges": [[channel, customer, q], ...], "gamma": g}
//   {"type": "explicit", "items": [...],
//    "values": {"<bitmask-as-int>": v, ...}, "submodular": bool}
// ---------------------------------------------------------------------------

inline Json valuation_to_json(const Valuation& f) {
  if (const auto* coverage = dynamic_cast<const CoverageValuation*>(&f)) {
    Json edges = Json::array();
    for (int w = 0; w < coverage->num_customers(); ++w) {
      for (const auto& [channel, q] : coverage->customer_edges(w)) {
        edges.push_back(Json::array({coverage->ground().id(channel),
                                     coverage->customers()[w], q}));
      }
    }
    return Json{{"type", "coverage"},
                {"channels", coverage->ground().ids()},
                {"customers", coverage->customers()},
                {"edges", std::move(edges)},
                {"gamma", coverage->revenue_per_customer()}};
  }
  if (const auto* table = dynamic_cast<const ExplicitValuation*>(&f)) {
    Json values = Json::object();
    for (std::uint64_t mask = 0; mask < table->table().size(); ++mask) {
      values[std::to_string(mask)] = table->table_at(mask);
    }
    return Json{{"type", "explicit"},
                {"items", table->ground().ids()},
                {"values", std::move(values)},
                {"submodular", table->submodular_hint()}};
  }
  throw InputError("serialization supports coverage and explicit valuations");
}

inline std::shared_ptr<const Valuation> valuation_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("type")) {
    throw InputError("valuation: expected an object with a \"type\" field");
  }
  const std::string type = j.at("type").get<std::string>();
  if (type == "coverage") {
    auto ground = std::make_shared<const GroundSet>(
        j.at("channels").get<std::vector<std::string>>());
    auto customers = j.at("customers").get<std::vector<std::string>>();
    std::unordered_map<std::string, int> customer_index;
    for (int i = 0; i < static_cast<int>(customers.size()); ++i) {
      if (!customer_index.emplace(customers[i], i).second) {
        throw InputError("coverage: duplicate customer id");
      }
    }
    std::vector<CoverageValuation::Edge> edges;
    for (const Json& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 3) {
        throw InputError("coverage: edge must be [channel, customer, q]");
      }
      const auto customer = customer_index.find(e[1].get<std::string>());
      if (customer == customer_index.end()) {
        throw InputError("coverage: edge references unknown customer");
      }
      edges.push_back({ground->index_of(e[0].get<std::string>()),
                       customer->second, e[2].get<double>()});
    }
    return std::make_shared<CoverageValuation>(
        std::move(ground), std::move(customers), edges,
        j.value("gamma", 1.0));
  }
  if (type == "explicit") {
    auto ground = std::make_shared<const GroundSet>(
        j.at("items").get<std::vector<std::string>>());
    const std::size_t size = std::size_t{1} << ground->size();
    const Json& values = j.at("values");
    if (values.size() != size) {
      throw InputError("explicit valuation: table must have 2^|V| entries");
    }
    std::vector<double> table(size);
    for (const auto& [key, value] : values.items()) {
      std::uint64_t mask = 0;
      try {
        mask = std::stoull(key);
      } catch (const std::exception&) {
        throw InputError("explicit valuation: non-integer mask key '" + key +
                         "'");
      }
      if (mask >= size) {
        throw InputError("explicit valuation: mask key out of range");
      }
      table[mask] = value.get<double>();
    }
    return std::make_shared<ExplicitValuation>(std::move(ground),
                                               std::move(table),
                                               j.value("submodular", false));
  }
  throw InputError("valuation: unknown type '" + type + "'");
}

// ---------------------------------------------------------------------------
// Instances
//
//   {"mode": "single" | "multi" | "collaborating",
//    "buyers": [{"valuation": {...}, "budget": number | "inf"}, ...]}
//
// A bare valuation object is accepted as a single-buyer instance.
// ---------------------------------------------------------------------------

struct InstanceFile {
  Instance instance;
  std::string mode;  // hint recorded in the file
};

inline Json instance_to_json(const Instance& inst, const std::string& mode) {
  Json buyers = Json::array();
  for (const Buyer& b : inst.buyers()) {
    buyers.push_back(Json{{"valuation", valuation_to_json(*b.valuation)},
                          {"budget", extended_to_json(b.budget)}});
  }
  return Json{{"mode", mode}, {"buyers", std::move(buyers)}};
}

inline InstanceFile instance_from_json(const Json& j) {
  if (j.is_object() && j.contains("type")) {
    return InstanceFile{
        Instance({Buyer{valuation_from_json(j), kUnlimitedBudget}}), "single"};
  }
  if (!j.is_object() || !j.contains("buyers")) {
    throw InputError("instance: expected a \"buyers\" list or a valuation");
  }
  std::vector<Buyer> buyers;
  for (const Json& b : j.at("buyers")) {
    buyers.push_back(Buyer{
        valuation_from_json(b.at("valuation")),
        b.contains("budget") ? extended_from_json(b.at("budget"), "budget")
                             : kUnlimitedBudget});
  }
  const std::string fallback = buyers.size() == 1 ? "single" : "multi";
  return InstanceFile{Instance(std::move(buyers)), j.value("mode", fallback)};
}

// ---------------------------------------------------------------------------
// Solutions
//
//   {"prices": {item: number | "inf"}, "assignment": [items] or [[items]],
//    "profit": number, "s": int, "alpha": number | null}
// ---------------------------------------------------------------------------

inline Json solution_to_json(const PricingSolution& sol,
                             const GroundSet& ground, bool multi_layout) {
  Json prices = Json::object();
  for (int i = 0; i < ground.size(); ++i) {
    prices[ground.id(i)] = extended_to_json(sol.prices[i]);
  }
  Json assignment;
  if (multi_layout) {
    assignment = Json::array();
    for (const ItemSet& part : sol.assignment) {
      assignment.push_back(item_names(ground, part));
    }
  } else {
    assignment = sol.assignment.empty()
                     ? Json::array()
                     : Json(item_names(ground, sol.assignment[0]));
  }
  return Json{{"prices", std::move(prices)},
              {"assignment", std::move(assignment)},
              {"profit", sol.profit},
              {"s", sol.chosen_s},
              {"alpha", std::isnan(sol.alpha) ? Json(nullptr) : Json(sol.alpha)}};
}

inline PricingSolution solution_from_json(const Json& j,
                                          const GroundSet& ground) {
  PricingSolution sol;
  sol.prices = PriceVector(ground.size());
  for (const auto& [id, value] : j.at("prices").items()) {
    sol.prices[ground.index_of(id)] = extended_from_json(value, "price");
  }
  const Json& assignment = j.at("assignment");
  const auto part_from = [&](const Json& names) {
    ItemSet part(ground.size());
    for (const Json& id : names) part.insert(ground.index_of(id.get<std::string>()));
    return part;
  };
  if (!assignment.empty() && assignment[0].is_array()) {
    for (const Json& names : assignment) sol.assignment.push_back(part_from(names));
  } else {
    sol.assignment.push_back(part_from(assignment));
  }
  sol.profit = j.value("profit", 0.0);
  sol.chosen_s = j.value("s", 0);
  sol.alpha = j.contains("alpha") && j.at("alpha").is_number()
                  ? j.at("alpha").get<double>()
                  : std::numeric_limits<double>::quiet_NaN();
  return sol;
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

inline Json stability_report_to_json(const StabilityReport& report,
                                     const GroundSet& ground) {
  Json witness = Json(nullptr);
  if (report.worst_deviation) {
    witness = Json{{"buyer", report.worst_deviation->buyer},
                   {"bundle", item_names(ground, report.worst_deviation->bundle)},
                   {"utility_gain", report.worst_deviation->utility_gain}};
  }
  return Json{{"pass", report.stable},
              {"alpha", report.alpha},
              {"witness", std::move(witness)}};
}

inline Json submodularity_report_to_json(const SubmodularityReport& report,
                                         const GroundSet& ground) {
  Json witness = Json(nullptr);
  if (report.monotonicity_witness) {
    witness = Json{
        {"kind", "monotonicity"},
        {"set", item_names(ground, report.monotonicity_witness->first)},
        {"added_item", ground.id(report.monotonicity_witness->second)}};
  } else if (report.submodularity_witness) {
    witness = Json{
        {"kind", "submodularity"},
        {"x", item_names(ground, report.submodularity_witness->first)},
        {"y", item_names(ground, report.submodularity_witness->second)}};
  }
  return Json{{"pass", report.pass()}, {"witness", std::move(witness)}};
}

// ---------------------------------------------------------------------------
// Files
// ---------------------------------------------------------------------------

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  Json j;
  try {
    in >> j;
  } catch (const Json::parse_error& e) {
    throw InputError("invalid JSON in '" + path + "': " + e.what());
  }
  return j;
}

inline void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

}  // namespace submod_pricing
