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
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "submod_pricing/baselines.hpp"
#include "submod_pricing/collab_pricing.hpp"
#include "submod_pricing/coverage.hpp"
#include "submod_pricing/instances.hpp"
#include "submod_pricing/json_io.hpp"
#include "submod_pricing/multi_pricing.hpp"
#include "submod_pricing/parallel.hpp"
#include "submod_pricing/single_pricing.hpp"
#include "submod_pricing/verify.hpp"

namespace submod_pricing::cli {

// Exit codes: 0 success, 1 verification/computation failure, 2 usage error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;

namespace detail {

// Locale-independent shortest round-trip formatting.
inline std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), v);
  return std::string(buffer, ptr);
}

inline std::vector<std::string> read_token_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

inline std::vector<std::string> split_tokens(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> tokens;
  std::string token;
  while (ss >> token) tokens.push_back(token);
  return tokens;
}

inline std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string field;
  while (std::getline(ss, field, ',')) {
    if (!field.empty()) out.push_back(field);
  }
  return out;
}

inline std::string certificate_path(const std::string& out) {
  const std::string suffix = ".json";
  if (out.size() > suffix.size() &&
      out.compare(out.size() - suffix.size(), suffix.size(), suffix) == 0) {
    return out.substr(0, out.size() - suffix.size()) + ".cert.json";
  }
  return out + ".cert.json";
}

inline double median_of_three(double a, double b, double c) {
  return std::max(std::min(a, b), std::min(std::max(a, b), c));
}

template <class Fn>
double timed_median_ms(Fn&& fn) {
  double samples[3];
  for (double& sample : samples) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    sample = std::chrono::duration<double, std::milli>(
                 std::chrono::steady_clock::now() - start)
                 .count();
  }
  return median_of_three(samples[0], samples[1], samples[2]);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// gen
// ---------------------------------------------------------------------------

struct GenOptions {
  std::string kind = "uniform";
  int num_channels = 16;
  int num_customers = 100;
  int degree = 4;
  double q_max = 0.3;
  int buyers = 1;
  std::uint64_t seed = 0;
  double gamma = 1.0;
  std::string clauses_file;
  int l = 1;
  std::string triples_file;
  std::string values;  // comma-separated ints
  std::string star;    // comma-separated item ids
  std::string log_file;
  int top_k = 1000;
  double slope = 0.0;
  double intercept = 0.01;
  std::string out;
};

inline int cmd_gen(const GenOptions& opt, std::ostream& err) {
  Json instance_json;
  std::optional<Json> certificate;

  if (opt.kind == "uniform" || opt.kind == "powerlaw") {
    SyntheticSpec spec;
    spec.num_channels = opt.num_channels;
    spec.num_customers = opt.num_customers;
    spec.customer_degree = opt.degree;
    spec.q_max = opt.q_max;
    spec.distribution = opt.kind == "uniform"
                            ? SyntheticSpec::LeftDegree::kUniform
                            : SyntheticSpec::LeftDegree::kPowerLaw;
    spec.seed = opt.seed;
    spec.num_buyers = opt.buyers;
    spec.gamma = opt.gamma;
    const Instance inst = gen_synthetic(spec);
    instance_json =
        instance_to_json(inst, inst.num_buyers() == 1 ? "single" : "multi");
  } else if (opt.kind == "3sat") {
    if (opt.clauses_file.empty()) {
      throw InputError("gen 3sat: --clauses FILE is required");
    }
    std::vector<Clause> clauses;
    for (const std::string& line :
         detail::read_token_lines(opt.clauses_file)) {
      const auto tokens = detail::split_tokens(line);
      if (tokens.size() != 3) {
        throw InputError("gen 3sat: every clause needs three variables");
      }
      clauses.push_back(Clause{tokens[0], tokens[1], tokens[2]});
    }
    const Instance inst = gen_3sat_fixture(clauses);
    instance_json = instance_to_json(inst, "single");
    const auto witness = one_in_three_witness(clauses);
    certificate = Json{{"kind", "one_in_three_3sat"},
                       {"clauses", clauses.size()},
                       {"satisfiable", witness.has_value()},
                       {"witness", witness ? Json(*witness) : Json(nullptr)}};
  } else if (opt.kind == "x3c") {
    if (opt.triples_file.empty()) {
      throw InputError("gen x3c: --triples FILE is required");
    }
    std::vector<Triple> triples;
    for (const std::string& line :
         detail::read_token_lines(opt.triples_file)) {
      const auto tokens = detail::split_tokens(line);
      if (tokens.size() != 3) {
        throw InputError("gen x3c: every triple needs three element indices");
      }
      triples.push_back(Triple{std::stoi(tokens[0]), std::stoi(tokens[1]),
                               std::stoi(tokens[2])});
    }
    X3cFixture fixture = gen_x3c_fixture(opt.l, triples);
    instance_json = instance_to_json(fixture.instance, "multi");
    const auto cover = exact_cover_witness(opt.l, triples);
    Json prices = Json::object();
    const GroundSet& g = fixture.instance.ground();
    for (int i = 0; i < g.size(); ++i) {
      prices[g.id(i)] = extended_to_json(fixture.candidate_prices[i]);
    }
    Json parts = Json::array();
    for (const ItemSet& part : fixture.assignment) {
      parts.push_back(item_names(g, part));
    }
    certificate = Json{{"kind", "x3c"},
                       {"l", opt.l},
                       {"num_triples", triples.size()},
                       {"has_exact_cover", cover.has_value()},
                       {"cover", cover ? Json(*cover) : Json(nullptr)},
                       {"assignment", std::move(parts)},
                       {"candidate_prices", std::move(prices)},
                       {"candidate_stable", !cover.has_value()}};
  } else if (opt.kind == "partition") {
    if (opt.values.empty()) {
      throw InputError("gen partition: --values a,b,c is required");
    }
    std::vector<long long> numbers;
    for (const std::string& token : detail::split_commas(opt.values)) {
      numbers.push_back(std::stoll(token));
    }
    PartitionFixture fixture = gen_partition_fixture(numbers);
    instance_json = instance_to_json(fixture.instance, "multi");
    const auto witness = equal_partition_witness(numbers);
    certificate =
        Json{{"kind", "partition"},
             {"values", numbers},
             {"target", fixture.target},
             {"has_equal_partition", witness.has_value()},
             {"witness", witness ? Json(*witness) : Json(nullptr)},
             {"stable_assignment_exists", witness.has_value()}};
  } else if (opt.kind == "eventlog") {
    if (opt.log_file.empty()) {
      throw InputError("gen eventlog: --log FILE is required");
    }
    EventLogSpec spec;
    spec.path = opt.log_file;
    spec.top_k = opt.top_k;
    spec.slope = opt.slope;
    spec.intercept = opt.intercept;
    spec.gamma = opt.gamma;
    const IngestResult result = ingest_event_log(spec);
    for (const std::string& warning : result.warnings) {
      err << "warning: " << warning << '\n';
    }
    if (result.malformed_rows > 0) {
      err << result.malformed_rows << " of " << result.data_rows
          << " rows were malformed\n";
    }
    instance_json = instance_to_json(*result.instance, "single");
  } else if (opt.kind == "harmonic") {
    auto f = gen_harmonic(opt.num_channels);
    instance_json =
        instance_to_json(Instance({Buyer{f, kUnlimitedBudget}}), "single");
    certificate = Json{{"kind", "harmonic"},
                       {"n", opt.num_channels},
                       {"max_welfare", f->value(ItemSet::full(opt.num_channels))},
                       {"max_profit", 1.0}};
  } else if (opt.kind == "hidden") {
    std::vector<std::string> ids(opt.num_channels);
    for (int i = 0; i < opt.num_channels; ++i) ids[i] = "e" + std::to_string(i);
    auto ground = std::make_shared<const GroundSet>(std::move(ids));
    ItemSet star(opt.num_channels);
    for (const std::string& id : detail::split_commas(opt.star)) {
      star.insert(ground->index_of(id));
    }
    auto f = gen_hidden_set_fixture(ground, star);
    instance_json =
        instance_to_json(Instance({Buyer{f, kUnlimitedBudget}}), "single");
    certificate = Json{{"kind", "hidden_set"},
                       {"star", item_names(*ground, star)},
                       {"optimal_profit", 2.0 * star.size()}};
  } else {
    throw InputError("gen: unknown --kind '" + opt.kind + "'");
  }

  if (opt.out.empty()) {
    std::cout << instance_json.dump(2) << '\n';
  } else {
    write_json_file(opt.out, instance_json);
    if (certificate) {
      write_json_file(detail::certificate_path(opt.out), *certificate);
    }
    err << "wrote " << opt.out << '\n';
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// solve
// ---------------------------------------------------------------------------

struct SolveOptions {
  std::string in;
  std::string mode;  // empty = take the file's hint
  std::string algo = "proposed";
  std::string budget_text;  // number or "inf"; empty = not given
  double budget = kUnlimitedBudget;
  bool budget_set = false;
  std::uint64_t seed = 0;
  bool verify = false;
};

namespace detail {

inline std::string resolve_mode(const std::string& flag_mode,
                                const std::string& file_mode) {
  std::string mode = flag_mode.empty() ? file_mode : flag_mode;
  if (mode == "collaborating") mode = "collab";
  if (mode != "single" && mode != "multi" && mode != "collab") {
    throw InputError("mode must be single, multi, or collab");
  }
  return mode;
}

}  // namespace detail

inline int cmd_solve(const SolveOptions& opt, std::ostream& out,
                     std::ostream& err) {
  const InstanceFile file = instance_from_json(read_json_file(opt.in));
  const Instance& inst = file.instance;
  const std::string mode = detail::resolve_mode(opt.mode, file.mode);

  PricingSolution sol;
  bool multi_layout = false;
  if (mode == "single") {
    if (inst.num_buyers() != 1) {
      throw InputError("single mode expects exactly one buyer");
    }
    const Valuation& f = *inst.buyer(0).valuation;
    const double budget =
        opt.budget_set ? opt.budget : inst.buyer(0).budget;
    if (opt.algo == "proposed") {
      sol = budget < kUnlimitedBudget ? solve_single_budgeted(f, budget)
                                      : solve_single(f);
    } else if (budget < kUnlimitedBudget) {
      throw InputError("budgets are supported by --algo proposed only");
    } else if (opt.algo == "sellall") {
      sol = sell_all(f);
    } else if (opt.algo == "random") {
      sol = random_pricing(f, opt.seed);
    } else if (opt.algo == "scaled") {
      sol = scaled_pricing(f);
    } else if (opt.algo == "ascending") {
      sol = ascending_pricing(f);
    } else if (opt.algo == "bruteforce") {
      sol = brute_force_single(f);
    } else {
      throw InputError("unknown --algo '" + opt.algo + "'");
    }
  } else if (mode == "multi") {
    multi_layout = true;
    if (opt.budget_set && opt.budget < kUnlimitedBudget) {
      throw UnsupportedError(
          "independent buyers with finite budgets are not supported");
    }
    if (opt.algo == "proposed") {
      sol = solve_multi(inst);
    } else if (opt.algo == "bruteforce") {
      sol = exhaustive_multi_opt(inst);
    } else {
      throw InputError("multi mode supports --algo proposed or bruteforce");
    }
  } else {  // collab
    if (opt.algo == "proposed") {
      sol = opt.budget_set ? solve_collab_budgeted(inst, opt.budget)
                           : solve_collab(inst);
    } else if (opt.algo == "bruteforce") {
      if (opt.budget_set) {
        throw InputError("budgets are supported by --algo proposed only");
      }
      sol = brute_force_collab(inst);
    } else {
      throw InputError("collab mode supports --algo proposed or bruteforce");
    }
  }

  Json output = solution_to_json(sol, inst.ground(), multi_layout);
  int exit_code = kExitOk;
  if (opt.verify) {
    if (inst.ground().size() > kEnumerationMaxItems) {
      err << "verify skipped: ground set too large for enumeration\n";
    } else {
      StabilityReport report;
      if (mode == "multi") {
        report = check_stable(inst, sol.prices, sol.assignment);
        const double promised = std::isnan(sol.alpha) ? 0.0 : sol.alpha;
        const bool pass = report.alpha >= promised - 1e-9;
        output["verified"] = Json{{"pass", pass}, {"alpha", report.alpha}};
        if (!pass) exit_code = kExitFail;
      } else {
        std::shared_ptr<const Valuation> target = inst.buyer(0).valuation;
        if (mode == "collab") {
          target = aggregate_as_explicit(
              *AggregatedValuation::from_instance(inst));
        }
        const double budget = opt.budget_set ? opt.budget
                              : mode == "single" ? inst.buyer(0).budget
                                                 : kUnlimitedBudget;
        report = check_stable(target, sol.prices, sol.assignment[0], budget);
        output["verified"] =
            Json{{"pass", report.stable}, {"alpha", report.alpha}};
        if (!report.stable) exit_code = kExitFail;
      }
    }
  }
  out << output.dump(2) << '\n';
  return exit_code;
}

// ---------------------------------------------------------------------------
// compare
// ---------------------------------------------------------------------------

struct CompareOptions {
  std::vector<std::string> inputs;
  std::uint64_t seed = 0;
  std::string out;  // empty = stdout
};

struct CompareRow {
  std::string name;
  double proposed = 0.0;
  double sellall = 0.0;
  double random = 0.0;
  double scaled = 0.0;
  double ascending = 0.0;
};

inline CompareRow compare_on(const Valuation& f, const std::string& name,
                             std::uint64_t seed) {
  CompareRow row;
  row.name = name;
  row.proposed = solve_single(f).profit;
  row.sellall = sell_all(f).profit;
  row.random = random_pricing(f, seed).profit;
  row.scaled = scaled_pricing(f).profit;
  row.ascending = ascending_pricing(f).profit;
  return row;
}

inline void write_compare_csv(const std::vector<CompareRow>& rows,
                              std::ostream& out) {
  const auto ratio = [](double value, double base) {
    if (base == 0.0) return value == 0.0 ? 1.0 : kInfinitePrice;
    return value / base;
  };
  out << "instance,proposed,sellall,random,scaled,ascending\n";
  for (const CompareRow& row : rows) {
    out << row.name << ',' << detail::format_double(ratio(row.proposed, row.proposed))
        << ',' << detail::format_double(ratio(row.sellall, row.proposed))
        << ',' << detail::format_double(ratio(row.random, row.proposed))
        << ',' << detail::format_double(ratio(row.scaled, row.proposed))
        << ',' << detail::format_double(ratio(row.ascending, row.proposed))
        << '\n';
  }
}

inline int cmd_compare(const CompareOptions& opt, std::ostream& out) {
  std::vector<CompareRow> rows(opt.inputs.size());
  std::vector<std::exception_ptr> errors(opt.inputs.size());
  parallel_for_index(static_cast<int>(opt.inputs.size()), [&](int i) {
    try {
      const InstanceFile file = instance_from_json(read_json_file(opt.inputs[i]));
      if (file.instance.num_buyers() != 1) {
        throw InputError("compare expects single-buyer instances");
      }
      rows[i] = compare_on(*file.instance.buyer(0).valuation, opt.inputs[i],
                           opt.seed);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  });
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  if (opt.out.empty()) {
    write_compare_csv(rows, out);
  } else {
    std::ofstream file(opt.out);
    if (!file) throw InputError("cannot write '" + opt.out + "'");
    write_compare_csv(rows, file);
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

struct SweepOptions {
  std::string param = "qmax";  // qmax | v | w | buyers
  SyntheticSpec base;          // uniform/powerlaw base configuration
  std::vector<double> grid;    // empty = default grid for the parameter
  std::string out;             // empty = stdout
};

struct SweepPoint {
  double value = 0.0;
  std::string mode;  // single | multi | collab
  double profit = 0.0;
  int assigned = 0;
  double wall_ms = 0.0;
};

inline std::vector<double> default_grid(const std::string& param) {
  if (param == "qmax") {
    std::vector<double> grid;
    for (int i = 1; i <= 19; ++i) grid.push_back(0.05 * i);
    return grid;
  }
  if (param == "v") return {16, 32, 64, 128, 256};
  if (param == "w") return {100, 1000, 10000};
  if (param == "buyers") return {1, 2, 4, 8};
  throw InputError("sweep: unknown --param '" + param + "'");
}

// One sweep point: builds the instance, runs the relevant solver three times
// and reports the median wall time alongside the (deterministic) result.
inline std::vector<SweepPoint> sweep_point(const SweepOptions& opt,
                                           double value) {
  SyntheticSpec spec = opt.base;
  if (opt.param == "qmax") {
    spec.q_max = value;
  } else if (opt.param == "v") {
    spec.num_channels = static_cast<int>(value);
    spec.customer_degree = std::min(spec.customer_degree, spec.num_channels);
  } else if (opt.param == "w") {
    spec.num_customers = static_cast<int>(value);
  } else if (opt.param == "buyers") {
    spec.num_buyers = static_cast<int>(value);
  } else {
    throw InputError("sweep: unknown --param '" + opt.param + "'");
  }

  std::vector<SweepPoint> points;
  const Instance inst = gen_synthetic(spec);
  if (opt.param == "buyers") {
    PricingSolution multi;
    const double multi_ms =
        detail::timed_median_ms([&] { multi = solve_multi(inst); });
    points.push_back({value, "multi", multi.profit,
                      multi.assigned_union().size(), multi_ms});
    PricingSolution collab;
    const double collab_ms =
        detail::timed_median_ms([&] { collab = solve_collab(inst); });
    points.push_back({value, "collab", collab.profit,
                      collab.assigned_union().size(), collab_ms});
  } else {
    PricingSolution sol;
    const double ms = detail::timed_median_ms(
        [&] { sol = solve_single(*inst.buyer(0).valuation); });
    points.push_back({value, "single", sol.profit,
                      sol.assignment[0].size(), ms});
  }
  return points;
}

inline std::vector<SweepPoint> run_sweep(const SweepOptions& opt) {
  const std::vector<double> grid =
      opt.grid.empty() ? default_grid(opt.param) : opt.grid;
  std::vector<std::vector<SweepPoint>> per_point(grid.size());
  std::vector<std::exception_ptr> errors(grid.size());
  parallel_for_index(static_cast<int>(grid.size()), [&](int i) {
    try {
      per_point[i] = sweep_point(opt, grid[i]);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  });
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<SweepPoint> flat;
  for (const auto& points : per_point) {
    flat.insert(flat.end(), points.begin(), points.end());
  }
  return flat;
}

inline void write_sweep_csv(const std::string& param,
                            const std::vector<SweepPoint>& points,
                            std::ostream& out) {
  out << "param,value,mode,profit,assigned,wall_ms\n";
  for (const SweepPoint& p : points) {
    out << param << ',' << detail::format_double(p.value) << ',' << p.mode
        << ',' << detail::format_double(p.profit) << ',' << p.assigned << ','
        << detail::format_double(p.wall_ms) << '\n';
  }
}

inline int cmd_sweep(const SweepOptions& opt, std::ostream& out) {
  const std::vector<SweepPoint> points = run_sweep(opt);
  if (opt.out.empty()) {
    write_sweep_csv(opt.param, points, out);
  } else {
    std::ofstream file(opt.out);
    if (!file) throw InputError("cannot write '" + opt.out + "'");
    write_sweep_csv(opt.param, points, file);
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

struct VerifyOptions {
  std::string check;  // submodular | stable | curvature | gap
  std::string in;
  std::string solution;
  std::string mode;  // for stable: single | multi | collab
};

inline int cmd_verify(const VerifyOptions& opt, std::ostream& out) {
  const InstanceFile file = instance_from_json(read_json_file(opt.in));
  const Instance& inst = file.instance;
  const GroundSet& ground = inst.ground();

  if (opt.check == "submodular") {
    const std::string mode = detail::resolve_mode(opt.mode, file.mode);
    SubmodularityReport report;
    if (mode == "collab") {
      report = check_monotone_submodular(
          *aggregate_as_explicit(*AggregatedValuation::from_instance(inst)));
    } else {
      for (const Buyer& b : inst.buyers()) {
        report = check_monotone_submodular(*b.valuation);
        if (!report.pass()) break;
      }
    }
    out << submodularity_report_to_json(report, ground).dump(2) << '\n';
    return report.pass() ? kExitOk : kExitFail;
  }

  if (opt.check == "stable") {
    if (opt.solution.empty()) {
      throw InputError("verify stable: --solution FILE is required");
    }
    const std::string mode = detail::resolve_mode(opt.mode, file.mode);
    const PricingSolution sol =
        solution_from_json(read_json_file(opt.solution), ground);
    StabilityReport report;
    if (mode == "multi") {
      report = check_stable(inst, sol.prices, sol.assignment);
    } else {
      std::shared_ptr<const Valuation> target = inst.buyer(0).valuation;
      if (mode == "collab") {
        target =
            aggregate_as_explicit(*AggregatedValuation::from_instance(inst));
      }
      report = check_stable(target, sol.prices, sol.assignment[0],
                            mode == "single" ? inst.buyer(0).budget
                                             : kUnlimitedBudget);
    }
    out << stability_report_to_json(report, ground).dump(2) << '\n';
    return report.stable ? kExitOk : kExitFail;
  }

  if (opt.check == "curvature") {
    const auto* coverage =
        dynamic_cast<const CoverageValuation*>(inst.buyer(0).valuation.get());
    if (coverage == nullptr) {
      throw InputError("verify curvature: expects a coverage valuation");
    }
    if (ground.size() > kEnumerationMaxItems) {
      throw CapacityError("verify curvature: ground set too large for the "
                          "exact profile");
    }
    Json kappa_exact = Json::array();
    Json kappa_bound = Json::array();
    bool pass = true;
    for (int s = 1; s <= ground.size(); ++s) {
      const double exact = exact_curvature(*coverage, s);
      const double bound = curvature_upper_bound(*coverage, s);
      kappa_exact.push_back(exact);
      kappa_bound.push_back(bound);
      pass = pass && bound >= exact - 1e-9;
    }
    out << Json{{"pass", pass},
                {"kappa_exact", std::move(kappa_exact)},
                {"kappa_bound", std::move(kappa_bound)}}
               .dump(2)
        << '\n';
    return pass ? kExitOk : kExitFail;
  }

  if (opt.check == "gap") {
    const Valuation& f = *inst.buyer(0).valuation;
    const double gap = welfare_profit_gap(f);
    Json result{{"gap", gap}};
    bool pass = true;
    if (f.submodular_hint() && ground.size() <= kExactCurvatureMaxItems) {
      const double kappa = exact_curvature(f, ground.size());
      result["kappa_full"] = kappa;
      if (kappa < 1.0) {
        const double ceiling = 1.0 / (1.0 - kappa);
        result["ceiling"] = ceiling;
        pass = gap <= ceiling + 1e-9;
      }
    }
    result["pass"] = pass;
    out << result.dump(2) << '\n';
    return pass ? kExitOk : kExitFail;
  }

  throw InputError("verify: unknown --check '" + opt.check + "'");
}

// ---------------------------------------------------------------------------
// Entry point
// ---------------------------------------------------------------------------

inline int run(std::vector<std::string> args) {
  CLI::App app{"Pricing toolkit for combinatorial sales with diminishing "
               "returns: solvers, baselines, generators, and checkers"};
  app.require_subcommand(1);

  GenOptions gen;
  CLI::App* gen_cmd = app.add_subcommand("gen", "Generate an instance file");
  gen_cmd->add_option(
      "--kind", gen.kind,
      "uniform|powerlaw|eventlog|3sat|x3c|partition|harmonic|hidden");
  gen_cmd->add_option("--v", gen.num_channels, "number of channels/items");
  gen_cmd->add_option("--w", gen.num_customers, "number of customers");
  gen_cmd->add_option("--d", gen.degree, "customer degree");
  gen_cmd->add_option("--qmax", gen.q_max, "activation probability ceiling");
  gen_cmd->add_option("--buyers", gen.buyers, "number of buyers");
  gen_cmd->add_option("--seed", gen.seed, "random seed");
  gen_cmd->add_option("--gamma", gen.gamma, "revenue per customer");
  gen_cmd->add_option("--clauses", gen.clauses_file,
                      "3sat: file with one clause (three variables) per line");
  gen_cmd->add_option("--l", gen.l, "x3c: universe size is 3l");
  gen_cmd->add_option("--triples", gen.triples_file,
                      "x3c: file with one triple of element indices per line");
  gen_cmd->add_option("--values", gen.values,
                      "partition: comma-separated positive integers");
  gen_cmd->add_option("--star", gen.star,
                      "hidden: comma-separated item ids of the hidden bundle");
  gen_cmd->add_option("--log", gen.log_file,
                      "eventlog: CSV file with header user,item[,weight]");
  gen_cmd->add_option("--topk", gen.top_k,
                      "eventlog: keep this many items by event count");
  gen_cmd->add_option("--slope", gen.slope,
                      "eventlog: probability = slope*weight + intercept");
  gen_cmd->add_option("--intercept", gen.intercept,
                      "eventlog: probability intercept");
  gen_cmd->add_option("--out", gen.out, "output instance path");

  SolveOptions solve;
  CLI::App* solve_cmd = app.add_subcommand("solve", "Solve an instance");
  solve_cmd->add_option("--in", solve.in, "instance file")->required();
  solve_cmd->add_option("--mode", solve.mode, "single|multi|collab");
  solve_cmd->add_option("--algo", solve.algo,
                        "proposed|sellall|random|scaled|ascending|bruteforce");
  solve_cmd->add_option("--budget", solve.budget_text,
                        "budget (number or inf)");
  solve_cmd->add_option("--seed", solve.seed, "seed for --algo random");
  solve_cmd->add_flag("--verify", solve.verify,
                      "re-check stability by enumeration when feasible");

  CompareOptions compare;
  CLI::App* compare_cmd =
      app.add_subcommand("compare", "Profit ratios of all algorithms");
  compare_cmd->add_option("--in", compare.inputs, "instance files")
      ->required()
      ->expected(-1);
  compare_cmd->add_option("--seed", compare.seed, "seed for the random baseline");
  compare_cmd->add_option("--out", compare.out, "output CSV path");

  SweepOptions sweep;
  sweep.base.num_channels = 100;
  sweep.base.num_customers = 10000;
  sweep.base.customer_degree = 10;
  sweep.base.q_max = 0.3;
  std::string sweep_kind = "uniform";
  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "Profit/size/time series over a parameter");
  sweep_cmd->add_option("--param", sweep.param, "qmax|v|w|buyers");
  sweep_cmd->add_option("--kind", sweep_kind, "uniform|powerlaw");
  sweep_cmd->add_option("--v", sweep.base.num_channels, "base channels");
  sweep_cmd->add_option("--w", sweep.base.num_customers, "base customers");
  sweep_cmd->add_option("--d", sweep.base.customer_degree, "base degree");
  sweep_cmd->add_option("--qmax", sweep.base.q_max, "base probability ceiling");
  sweep_cmd->add_option("--seed", sweep.base.seed, "random seed");
  sweep_cmd->add_option("--grid", sweep.grid, "explicit grid values")
      ->expected(-1);
  sweep_cmd->add_option("--out", sweep.out, "output CSV path");

  VerifyOptions verify;
  CLI::App* verify_cmd =
      app.add_subcommand("verify", "Run an enumeration-backed check");
  verify_cmd->add_option("--check", verify.check,
                         "submodular|stable|curvature|gap")
      ->required();
  verify_cmd->add_option("--in", verify.in, "instance file")->required();
  verify_cmd->add_option("--solution", verify.solution,
                         "solution file (for --check stable)");
  verify_cmd->add_option("--mode", verify.mode, "single|multi|collab");

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints help or the parse error
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (gen_cmd->parsed()) return cmd_gen(gen, std::cerr);
    if (solve_cmd->parsed()) {
      solve.budget_set = !solve.budget_text.empty();
      if (solve.budget_set) {
        try {
          solve.budget = solve.budget_text == "inf"
                             ? kUnlimitedBudget
                             : std::stod(solve.budget_text);
        } catch (const std::exception&) {
          throw InputError("budget must be a number or \"inf\"");
        }
        if (!(solve.budget >= 0.0)) throw InputError("budget must be >= 0");
      }
      return cmd_solve(solve, std::cout, std::cerr);
    }
    if (compare_cmd->parsed()) return cmd_compare(compare, std::cout);
    if (sweep_cmd->parsed()) {
      sweep.base.distribution = sweep_kind == "powerlaw"
                                    ? SyntheticSpec::LeftDegree::kPowerLaw
                                    : SyntheticSpec::LeftDegree::kUniform;
      return cmd_sweep(sweep, std::cout);
    }
    if (verify_cmd->parsed()) return cmd_verify(verify, std::cout);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const CapacityError& e) {
    std::cerr << "refused: " << e.what() << '\n';
    return kExitUsage;
  } catch (const UnsupportedError& e) {
    std::cerr << "unsupported: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "failed: " << e.what() << '\n';
    return kExitFail;
  }
  return kExitUsage;
}

}  // namespace submod_pricing::cli
