// Command-line front end: solve, sweep, compare and gen.
//
// Exit codes: 0 success, 2 validation or input error, 3 no incumbent.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hhcare/hhcare.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNoIncumbent = 3;

std::vector<std::string> split(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<hhcare::Rational> parse_grid(const std::string& text, const std::string& flag) {
  std::vector<hhcare::Rational> out;
  for (const std::string& item : split(text)) {
    try {
      out.push_back(hhcare::Rational::parse(item));
    } catch (const std::exception& e) {
      throw hhcare::ValidationError(flag, e.what());
    }
  }
  return out;
}

hhcare::Rational parse_value(const std::string& text, const std::string& flag) {
  try {
    return hhcare::Rational::parse(text);
  } catch (const std::exception& e) {
    throw hhcare::ValidationError(flag, e.what());
  }
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    hhcare::io_detail::write_file(path, text);
  }
}

struct CommonFlags {
  std::string theta = "0";
  std::string alpha = "0";
  std::string beta_target = "1";
  std::uint64_t seed = 0;
  double time_limit = 10.0;
  std::string out;
};

hhcare::RunOptions run_options(const CommonFlags& f) {
  hhcare::RunOptions opt;
  opt.beta_target = parse_value(f.beta_target, "--beta-target");
  if (!(opt.beta_target > 0) || opt.beta_target > 1) throw hhcare::ValidationError("--beta-target", "must lie in (0, 1]");
  if (!(f.time_limit > 0.0)) throw hhcare::ValidationError("--time-limit", "must be positive");
  opt.seed = f.seed;
  opt.time_limit = std::chrono::duration<double>(f.time_limit);
  return opt;
}

void print_summary(const hhcare::Instance& inst, const std::string& algorithm, const hhcare::RunResult& run) {
  const hhcare::BalanceSummary b = hhcare::summarize_balance(inst, run.metrics);
  std::cout << "algorithm      " << algorithm << "\n"
            << "status         " << run.status << "\n"
            << "objective      " << hhcare::format_decimal(run.metrics.objective) << "\n"
            << "total_utility  " << hhcare::format_decimal(run.metrics.total_utility) << "\n"
            << "total_cost     " << run.metrics.total_cost << "\n"
            << "max_fill       " << run.metrics.max_fill << "\n"
            << "min_fill       " << hhcare::format_decimal(b.min_fill) << "\n"
            << "max_util       " << run.metrics.max_util << "\n"
            << "min_util       " << hhcare::format_decimal(b.min_util) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Caregiver-to-patient hour assignment: greedy, tabu and exact solvers"};
  app.require_subcommand(1);

  CommonFlags solve_flags;
  std::string solve_instance;
  std::string solve_algorithm = "greedy";
  auto* solve = app.add_subcommand("solve", "Solve an instance and write a solution document");
  solve->add_option("instance", solve_instance, "Instance document")->required();
  solve->add_option("--algorithm", solve_algorithm, "greedy, tabu or exact");
  solve->add_option("--theta", solve_flags.theta, "Equity penalty weight");
  solve->add_option("--alpha", solve_flags.alpha, "Efficacy penalty weight");
  solve->add_option("--beta-target", solve_flags.beta_target, "Greedy fill-rate cap in (0, 1]");
  solve->add_option("--seed", solve_flags.seed, "Tabu tie-breaking seed");
  solve->add_option("--time-limit", solve_flags.time_limit, "Seconds per solver run");
  solve->add_option("--out", solve_flags.out, "Solution document path (default: stdout)");

  CommonFlags sweep_flags;
  std::string sweep_instance;
  std::string sweep_algorithms = "greedy,tabu";
  std::string sweep_budgets;
  bool sweep_no_timing = false;
  auto* sweep_cmd = app.add_subcommand("sweep", "Tabulate objective and balance over penalty-weight grids");
  sweep_cmd->add_option("instance", sweep_instance, "Instance document")->required();
  sweep_cmd->add_option("--algorithm", sweep_algorithms, "Comma-separated algorithms");
  sweep_cmd->add_option("--theta", sweep_flags.theta, "Comma-separated theta grid");
  sweep_cmd->add_option("--alpha", sweep_flags.alpha, "Comma-separated alpha grid");
  sweep_cmd->add_option("--budget", sweep_budgets, "Comma-separated budget grid (default: instance budget)");
  sweep_cmd->add_option("--beta-target", sweep_flags.beta_target, "Greedy fill-rate cap in (0, 1]");
  sweep_cmd->add_option("--seed", sweep_flags.seed, "Tabu tie-breaking seed");
  sweep_cmd->add_option("--time-limit", sweep_flags.time_limit, "Seconds per solver run");
  sweep_cmd->add_option("--out", sweep_flags.out, "CSV path (default: stdout)");
  sweep_cmd->add_flag("--no-timing", sweep_no_timing, "Write 0 in the runtime column");

  CommonFlags compare_flags;
  std::string compare_instance;
  bool compare_force_exact = false;
  bool compare_no_timing = false;
  auto* compare_cmd = app.add_subcommand("compare", "Greedy vs tabu vs exact with objective gaps");
  compare_cmd->add_option("instance", compare_instance, "Instance document")->required();
  compare_cmd->add_option("--theta", compare_flags.theta, "Equity penalty weight");
  compare_cmd->add_option("--alpha", compare_flags.alpha, "Efficacy penalty weight");
  compare_cmd->add_option("--beta-target", compare_flags.beta_target, "Greedy fill-rate cap in (0, 1]");
  compare_cmd->add_option("--seed", compare_flags.seed, "Tabu tie-breaking seed");
  compare_cmd->add_option("--time-limit", compare_flags.time_limit, "Seconds per solver run");
  compare_cmd->add_option("--out", compare_flags.out, "CSV path (default: stdout)");
  compare_cmd->add_flag("--exact", compare_force_exact, "Run the exact solver even on larger instances");
  compare_cmd->add_flag("--no-timing", compare_no_timing, "Write 0 in the runtime column");

  hhcare::GeneratorParams gen_params;
  std::string gen_out;
  std::string gen_cost_lo = "1";
  std::string gen_cost_hi = "5";
  std::string gen_utility_lo = "1";
  std::string gen_utility_hi = "10";
  std::string gen_budget_factor = "0.6";
  auto* gen = app.add_subcommand("gen", "Generate a random instance");
  gen->add_option("--n", gen_params.n, "Caregivers");
  gen->add_option("--m", gen_params.m, "Patients");
  gen->add_option("--s", gen_params.s, "Services");
  gen->add_option("--seed", gen_params.seed, "Generator seed");
  gen->add_option("--demand-min", gen_params.demand.lo);
  gen->add_option("--demand-max", gen_params.demand.hi);
  gen->add_option("--capacity-min", gen_params.capacity.lo);
  gen->add_option("--capacity-max", gen_params.capacity.hi);
  gen->add_option("--cost-min", gen_cost_lo);
  gen->add_option("--cost-max", gen_cost_hi);
  gen->add_option("--cost-decimals", gen_params.cost_decimals);
  gen->add_option("--utility-min", gen_utility_lo);
  gen->add_option("--utility-max", gen_utility_hi);
  gen->add_option("--utility-decimals", gen_params.utility_decimals);
  gen->add_option("--skill-density", gen_params.skill_density);
  gen->add_option("--budget-factor", gen_budget_factor);
  gen->add_option("--caregivers-per-patient-min", gen_params.caregivers_per_patient.lo);
  gen->add_option("--caregivers-per-patient-max", gen_params.caregivers_per_patient.hi);
  gen->add_option("--patients-per-caregiver-min", gen_params.patients_per_caregiver.lo);
  gen->add_option("--patients-per-caregiver-max", gen_params.patients_per_caregiver.hi);
  gen->add_option("--out", gen_out, "Instance path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (*solve) {
      const hhcare::Instance inst = hhcare::load_instance(solve_instance);
      const hhcare::Algorithm algorithm = hhcare::parse_algorithm(solve_algorithm);
      const hhcare::PenaltyWeights weights{parse_value(solve_flags.theta, "--theta"),
                                           parse_value(solve_flags.alpha, "--alpha")};
      hhcare::validate(weights);
      const hhcare::RunResult run = hhcare::run_algorithm(inst, weights, algorithm, run_options(solve_flags));
      if (!hhcare::check_feasibility(inst, run.assignment).ok()) {
        std::cerr << "error: solver returned no feasible incumbent\n";
        return kExitNoIncumbent;
      }
      const hhcare::SolutionDocument doc{run.assignment, weights, hhcare::to_string(algorithm), run.status};
      if (solve_flags.out.empty() || solve_flags.out == "-") {
        std::cout << hhcare::dump_solution(inst, doc);
      } else {
        hhcare::save_solution(inst, doc, solve_flags.out);
        print_summary(inst, hhcare::to_string(algorithm), run);
      }
    } else if (*sweep_cmd) {
      const hhcare::Instance inst = hhcare::load_instance(sweep_instance);
      hhcare::SweepGrid grid;
      grid.thetas = parse_grid(sweep_flags.theta, "--theta");
      grid.alphas = parse_grid(sweep_flags.alpha, "--alpha");
      if (!sweep_budgets.empty()) grid.budgets = parse_grid(sweep_budgets, "--budget");
      for (const hhcare::Rational& b : grid.budgets) {
        if (b < 0) throw hhcare::ValidationError("--budget", "must be non-negative");
      }
      for (const std::string& name : split(sweep_algorithms)) grid.algorithms.push_back(hhcare::parse_algorithm(name));
      const auto rows = hhcare::sweep(inst, grid, run_options(sweep_flags));
      write_output(sweep_flags.out, hhcare::sweep_csv(rows, !sweep_no_timing));
    } else if (*compare_cmd) {
      const hhcare::Instance inst = hhcare::load_instance(compare_instance);
      const hhcare::PenaltyWeights weights{parse_value(compare_flags.theta, "--theta"),
                                           parse_value(compare_flags.alpha, "--alpha")};
      hhcare::validate(weights);
      const bool with_exact = compare_force_exact || hhcare::is_micro(inst);
      const auto rows = hhcare::compare(inst, weights, run_options(compare_flags), with_exact);
      write_output(compare_flags.out, hhcare::compare_csv(rows, !compare_no_timing));
    } else if (*gen) {
      gen_params.cost = {parse_value(gen_cost_lo, "--cost-min"), parse_value(gen_cost_hi, "--cost-max")};
      gen_params.utility = {parse_value(gen_utility_lo, "--utility-min"), parse_value(gen_utility_hi, "--utility-max")};
      gen_params.budget_factor = parse_value(gen_budget_factor, "--budget-factor");
      const hhcare::Instance inst = hhcare::generate(gen_params);
      write_output(gen_out, hhcare::dump_instance(inst));
    }
  } catch (const hhcare::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitOk;
}
