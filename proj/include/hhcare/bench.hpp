#pragma once

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hhcare/exact.hpp"
#include "hhcare/greedy.hpp"
#include "hhcare/model.hpp"
#include "hhcare/tabu.hpp"

namespace hhcare {

enum class Algorithm { Exact, Greedy, Tabu };

inline const char* to_string(Algorithm a) {
  switch (a) {
    case Algorithm::Exact: return "exact";
    case Algorithm::Greedy: return "greedy";
    case Algorithm::Tabu: return "tabu";
  }
  return "unknown";
}

inline Algorithm parse_algorithm(const std::string& name) {
  if (name == "exact") return Algorithm::Exact;
  if (name == "greedy") return Algorithm::Greedy;
  if (name == "tabu") return Algorithm::Tabu;
  throw ValidationError("algorithm", "unknown algorithm '" + name + "' (expected greedy, tabu or exact)");
}

struct RunOptions {
  Rational beta_target{1};
  std::uint64_t seed = 0;
  std::chrono::duration<double> time_limit{10.0};
  std::uint64_t max_nodes = SolveLimits{}.max_nodes;
};

struct RunResult {
  Assignment assignment;
  SolutionMetrics metrics;
  std::string status;
  double runtime_ms = 0.0;
};

/// Runs one algorithm. Tabu starts from the greedy construction.
inline RunResult run_algorithm(const Instance& inst, const PenaltyWeights& weights, Algorithm algorithm,
                               const RunOptions& opt) {
  const auto start = std::chrono::steady_clock::now();
  RunResult out;
  switch (algorithm) {
    case Algorithm::Greedy: {
      out.assignment = greedy_construct(inst, opt.beta_target).first;
      out.status = "heuristic";
      break;
    }
    case Algorithm::Tabu: {
      TabuParams params;
      params.time_limit = opt.time_limit;
      params.seed = opt.seed;
      params.beta_target = opt.beta_target;
      const Assignment initial = greedy_construct(inst, opt.beta_target).first;
      TabuResult res = tabu_search(inst, weights, initial, params);
      out.assignment = std::move(res.incumbent);
      out.status = to_string(res.stop);
      break;
    }
    case Algorithm::Exact: {
      SolveLimits limits;
      limits.time_limit = opt.time_limit;
      limits.max_nodes = opt.max_nodes;
      OptimalSolution sol = solve_exact(inst, weights, limits);
      out.assignment = std::move(sol.assignment);
      out.status = to_string(sol.status);
      break;
    }
  }
  out.metrics = compute_metrics(inst, weights, out.assignment);
  out.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return out;
}

/// Spread and level of the fill-rates of patients with demand, and of the
/// utilizations of caregivers with capacity. All zero when the group is empty.
struct BalanceSummary {
  double equity_spread = 0.0;
  double mean_fill = 0.0;
  double min_fill = 0.0;
  double efficacy_spread = 0.0;
  double mean_util = 0.0;
  double min_util = 0.0;
};

inline BalanceSummary summarize_balance(const Instance& inst, const SolutionMetrics& m) {
  BalanceSummary out;
  std::optional<Rational> min_fill;
  double fill_sum = 0.0;
  std::size_t patients = 0;
  for (std::size_t j = 0; j < inst.m; ++j) {
    if (!patient_included(inst, j)) continue;
    min_fill = min_fill ? std::min(*min_fill, m.fill_rate[j]) : m.fill_rate[j];
    fill_sum += m.fill_rate[j].to_double();
    ++patients;
  }
  if (patients > 0) {
    out.equity_spread = (m.max_fill - *min_fill).to_double();
    out.mean_fill = fill_sum / static_cast<double>(patients);
    out.min_fill = min_fill->to_double();
  }
  std::optional<Rational> min_util;
  double util_sum = 0.0;
  std::size_t caregivers = 0;
  for (std::size_t i = 0; i < inst.n; ++i) {
    if (!caregiver_included(inst, i)) continue;
    min_util = min_util ? std::min(*min_util, m.utilization[i]) : m.utilization[i];
    util_sum += m.utilization[i].to_double();
    ++caregivers;
  }
  if (caregivers > 0) {
    out.efficacy_spread = (m.max_util - *min_util).to_double();
    out.mean_util = util_sum / static_cast<double>(caregivers);
    out.min_util = min_util->to_double();
  }
  return out;
}

struct SweepRow {
  Rational theta;
  Rational alpha;
  Rational budget;
  Algorithm algorithm = Algorithm::Greedy;
  double objective = 0.0;
  double total_utility = 0.0;
  BalanceSummary balance;
  Rational total_cost;
  double runtime_ms = 0.0;
  std::string status;
};

struct SweepGrid {
  std::vector<Rational> thetas;
  std::vector<Rational> alphas;
  std::vector<Rational> budgets;  // empty: the instance budget only
  std::vector<Algorithm> algorithms;
};

/// One row per grid point and algorithm, ordered by theta, then alpha, then
/// budget, then algorithm name.
inline std::vector<SweepRow> sweep(const Instance& inst, const SweepGrid& grid, const RunOptions& opt) {
  if (grid.thetas.empty()) throw ValidationError("theta", "grid must not be empty");
  if (grid.alphas.empty()) throw ValidationError("alpha", "grid must not be empty");
  if (grid.algorithms.empty()) throw ValidationError("algorithm", "at least one algorithm is required");
  std::vector<Algorithm> algorithms = grid.algorithms;
  std::sort(algorithms.begin(), algorithms.end(),
            [](Algorithm a, Algorithm b) { return std::string(to_string(a)) < std::string(to_string(b)); });
  algorithms.erase(std::unique(algorithms.begin(), algorithms.end()), algorithms.end());
  const std::vector<Rational> budgets = grid.budgets.empty() ? std::vector<Rational>{inst.budget} : grid.budgets;

  std::vector<SweepRow> rows;
  for (const Rational& theta : grid.thetas) {
    for (const Rational& alpha : grid.alphas) {
      const PenaltyWeights weights{theta, alpha};
      validate(weights);
      for (const Rational& budget : budgets) {
        Instance point = inst;
        point.budget = budget;
        for (Algorithm algorithm : algorithms) {
          const RunResult run = run_algorithm(point, weights, algorithm, opt);
          SweepRow row;
          row.theta = theta;
          row.alpha = alpha;
          row.budget = budget;
          row.algorithm = algorithm;
          row.objective = run.metrics.objective;
          row.total_utility = run.metrics.total_utility;
          row.balance = summarize_balance(point, run.metrics);
          row.total_cost = run.metrics.total_cost;
          row.runtime_ms = run.runtime_ms;
          row.status = run.status;
          rows.push_back(std::move(row));
        }
      }
    }
  }
  return rows;
}

/// Fixed-point with nine fractional digits.
inline std::string format_decimal(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9f", v);
  std::string out = buf;
  if (out == "-0.000000000") out.erase(0, 1);
  return out;
}

inline std::string format_decimal(const Rational& r) { return format_decimal(r.to_double()); }

inline std::string sweep_csv(const std::vector<SweepRow>& rows, bool include_timing = true) {
  std::ostringstream out;
  out << "theta,alpha,budget,algorithm,objective,total_utility,equity_spread,mean_fill,min_fill,"
         "efficacy_spread,mean_util,min_util,total_cost,runtime_ms,status\n";
  for (const SweepRow& r : rows) {
    out << format_decimal(r.theta) << ',' << format_decimal(r.alpha) << ',' << format_decimal(r.budget) << ','
        << to_string(r.algorithm) << ',' << format_decimal(r.objective) << ',' << format_decimal(r.total_utility) << ','
        << format_decimal(r.balance.equity_spread) << ',' << format_decimal(r.balance.mean_fill) << ','
        << format_decimal(r.balance.min_fill) << ',' << format_decimal(r.balance.efficacy_spread) << ','
        << format_decimal(r.balance.mean_util) << ',' << format_decimal(r.balance.min_util) << ','
        << format_decimal(r.total_cost) << ',' << format_decimal(include_timing ? r.runtime_ms : 0.0) << ','
        << r.status << '\n';
  }
  return out.str();
}

/// Instances small enough for the exact solver to be run by default.
inline bool is_micro(const Instance& inst) {
  Hours total = 0;
  for (std::size_t j = 0; j < inst.m; ++j) total += inst.total_demand(j);
  return total <= 20;
}

struct CompareRow {
  Algorithm algorithm = Algorithm::Greedy;
  double objective = 0.0;
  std::optional<double> gap;  // (exact - objective) / max(1, exact), when exact ran
  std::string status;
  double runtime_ms = 0.0;
};

/// Greedy, tabu and, on micro instances, exact, with gaps to the exact value.
inline std::vector<CompareRow> compare(const Instance& inst, const PenaltyWeights& weights, const RunOptions& opt,
                                       bool with_exact) {
  std::vector<CompareRow> rows;
  std::vector<Algorithm> algorithms{Algorithm::Greedy, Algorithm::Tabu};
  if (with_exact) algorithms.push_back(Algorithm::Exact);
  for (Algorithm a : algorithms) {
    const RunResult run = run_algorithm(inst, weights, a, opt);
    rows.push_back(CompareRow{a, run.metrics.objective, std::nullopt, run.status, run.runtime_ms});
  }
  if (with_exact) {
    const double exact = rows.back().objective;
    for (CompareRow& r : rows) r.gap = (exact - r.objective) / std::max(1.0, exact);
  }
  return rows;
}

inline std::string compare_csv(const std::vector<CompareRow>& rows, bool include_timing = true) {
  std::ostringstream out;
  out << "algorithm,objective,gap,status,runtime_ms\n";
  for (const CompareRow& r : rows) {
    out << to_string(r.algorithm) << ',' << format_decimal(r.objective) << ','
        << (r.gap ? format_decimal(*r.gap) : std::string("")) << ',' << r.status << ','
        << format_decimal(include_timing ? r.runtime_ms : 0.0) << '\n';
  }
  return out.str();
}

}  // namespace hhcare
