#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hhcare/model.hpp"

namespace hhcare {

enum class SolveStatus { ProvenOptimal, NodeLimit, TimeLimit };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::ProvenOptimal: return "proven-optimal";
    case SolveStatus::NodeLimit: return "node-limit";
    case SolveStatus::TimeLimit: return "time-limit";
  }
  return "unknown";
}

struct SolveLimits {
  std::uint64_t max_nodes = 100'000'000;
  std::chrono::duration<double> time_limit{60.0};
};

inline void validate(const SolveLimits& limits) {
  if (limits.max_nodes < 1) throw ValidationError("max_nodes", "must be at least 1");
  if (!(limits.time_limit.count() > 0.0)) throw ValidationError("time_limit", "must be positive");
}

struct OptimalSolution {
  Assignment assignment;
  SolutionMetrics metrics;
  SolveStatus status = SolveStatus::ProvenOptimal;
  std::uint64_t nodes_explored = 0;

  double objective() const { return metrics.objective; }
};

namespace detail {

/// sum_j p_j * min(1, reachable_j / D_j), with patients without demand at 1.
/// Terms are formed exactly and summed in the same order as compute_metrics,
/// so a fully decided assignment reproduces its total utility bit for bit.
inline double utility_bound(const Instance& inst, const std::vector<Hours>& reachable) {
  double bound = 0.0;
  for (std::size_t j = 0; j < inst.m; ++j) {
    const Hours total = inst.total_demand(j);
    const Rational fill = total > 0 ? Rational(std::min(reachable[j], total), total) : Rational(1);
    bound += (inst.utility[j] * fill).to_double();
  }
  return bound;
}

/// Hours still reachable per patient when the entries flagged in `open`
/// may take any value: fixed hours plus, per service, the smaller of the
/// residual demand and the residual capacity of skilled open caregivers.
inline std::vector<Hours> reachable_hours(const Instance& inst, const std::vector<Hours>& fixed_patient_hours,
                                          const Matrix<Hours>& residual_demand, const Matrix<Hours>& open_capacity) {
  std::vector<Hours> reach(inst.m, 0);
  for (std::size_t j = 0; j < inst.m; ++j) {
    reach[j] = fixed_patient_hours[j];
    for (std::size_t k = 0; k < inst.s; ++k) {
      reach[j] += std::max<Hours>(0, std::min(residual_demand[j][k], open_capacity[j][k]));
    }
  }
  return reach;
}

}  // namespace detail

/// Upper bound on the objective of any feasible completion of `partial`.
/// Entries with row-major index below `decided` are fixed at their values in
/// `partial`; all later entries are open. Penalty terms are never positive,
/// so dropping them (and budget and cardinality coupling) keeps the bound
/// valid.
inline double upper_bound(const Instance& inst, const PenaltyWeights& weights, const Assignment& partial,
                          std::size_t decided) {
  expect_dimensions(inst, partial);
  (void)weights;
  std::vector<Hours> fixed_patient(inst.m, 0);
  std::vector<Hours> residual_capacity = inst.capacity;
  Matrix<Hours> residual_demand = inst.demand;
  for (std::size_t i = 0; i < inst.n; ++i) {
    for (std::size_t j = 0; j < inst.m; ++j) {
      for (std::size_t k = 0; k < inst.s; ++k) {
        if (partial.index(i, j, k) >= decided) continue;
        const Hours h = partial(i, j, k);
        fixed_patient[j] += h;
        residual_capacity[i] -= h;
        residual_demand[j][k] -= h;
      }
    }
  }
  Matrix<Hours> open(inst.m, std::vector<Hours>(inst.s, 0));
  for (std::size_t i = 0; i < inst.n; ++i) {
    for (std::size_t j = 0; j < inst.m; ++j) {
      for (std::size_t k = 0; k < inst.s; ++k) {
        if (partial.index(i, j, k) >= decided && inst.skilled(i, k)) open[j][k] += std::max<Hours>(0, residual_capacity[i]);
      }
    }
  }
  return detail::utility_bound(
      inst, detail::reachable_hours(inst, fixed_patient, residual_demand, open));
}

namespace detail {

class BranchAndBound {
 public:
  BranchAndBound(const Instance& inst, const PenaltyWeights& w, const SolveLimits& limits)
      : inst_(inst),
        weights_(w),
        limits_(limits),
        x_(Assignment::zeros_like(inst)),
        residual_capacity_(inst.capacity),
        residual_demand_(inst.demand),
        residual_budget_(inst.budget),
        patient_hours_(inst.m, 0),
        pair_hours_(inst.n, std::vector<Hours>(inst.m, 0)),
        patient_links_(inst.m, 0),
        caregiver_links_(inst.n, 0) {
    for (std::size_t i = 0; i < inst.n; ++i) {
      for (std::size_t j = 0; j < inst.m; ++j) {
        for (std::size_t k = 0; k < inst.s; ++k) {
          if (inst.skilled(i, k) && inst.demand[j][k] > 0 && inst.capacity[i] > 0) free_.push_back({i, j, k});
        }
      }
    }
    best_ = x_;
    best_objective_ = evaluate_objective(inst, w, x_);
  }

  OptimalSolution run() {
    start_ = std::chrono::steady_clock::now();
    dfs(0);
    OptimalSolution out;
    out.assignment = best_;
    out.metrics = compute_metrics(inst_, weights_, best_);
    out.status = status_;
    out.nodes_explored = nodes_;
    return out;
  }

 private:
  struct Entry {
    std::size_t i, j, k;
  };

  bool out_of_budget() {
    if (nodes_ >= limits_.max_nodes) {
      status_ = SolveStatus::NodeLimit;
      return true;
    }
    if ((nodes_ & 1023U) == 0) {
      const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start_;
      if (elapsed >= limits_.time_limit) {
        status_ = SolveStatus::TimeLimit;
        return true;
      }
    }
    return false;
  }

  double bound(std::size_t pos) const {
    Matrix<Hours> open(inst_.m, std::vector<Hours>(inst_.s, 0));
    for (std::size_t p = pos; p < free_.size(); ++p) {
      const Entry& e = free_[p];
      open[e.j][e.k] += std::max<Hours>(0, residual_capacity_[e.i]);
    }
    return utility_bound(inst_, reachable_hours(inst_, patient_hours_, residual_demand_, open));
  }

  void leaf() {
    const double value = evaluate_objective(inst_, weights_, x_);
    if (value > best_objective_ + objective_tolerance ||
        (value >= best_objective_ - objective_tolerance && x_ < best_)) {
      best_ = x_;
      best_objective_ = value;
    }
  }

  void apply(const Entry& e, Hours h) {
    const bool was_linked = pair_hours_[e.i][e.j] > 0;
    x_.add(e.i, e.j, e.k, h);
    residual_capacity_[e.i] -= h;
    residual_demand_[e.j][e.k] -= h;
    residual_budget_ -= inst_.cost(e.i, e.j, e.k) * Rational(h);
    patient_hours_[e.j] += h;
    pair_hours_[e.i][e.j] += h;
    const bool linked = pair_hours_[e.i][e.j] > 0;
    if (linked != was_linked) {
      const Hours d = linked ? 1 : -1;
      patient_links_[e.j] += d;
      caregiver_links_[e.i] += d;
    }
  }

  void dfs(std::size_t pos) {
    if (status_ != SolveStatus::ProvenOptimal) return;
    ++nodes_;
    if (out_of_budget()) return;
    if (pos == free_.size()) {
      leaf();
      return;
    }
    if (bound(pos) < best_objective_ - objective_tolerance) return;

    const Entry& e = free_[pos];
    Hours cap = std::min(residual_capacity_[e.i], residual_demand_[e.j][e.k]);
    const Rational& unit = inst_.cost(e.i, e.j, e.k);
    if (!unit.is_zero()) cap = std::min(cap, (residual_budget_ / unit).floor());
    if (pair_hours_[e.i][e.j] == 0 && (patient_links_[e.j] >= inst_.max_caregivers_per_patient[e.j] ||
                                       caregiver_links_[e.i] >= inst_.max_patients_per_caregiver[e.i])) {
      cap = 0;
    }
    for (Hours h = std::max<Hours>(cap, 0); h >= 0; --h) {
      if (h > 0) apply(e, h);
      dfs(pos + 1);
      if (h > 0) apply(e, -h);
      if (status_ != SolveStatus::ProvenOptimal) return;
    }
  }

  const Instance& inst_;
  const PenaltyWeights& weights_;
  SolveLimits limits_;
  std::vector<Entry> free_;

  Assignment x_;
  std::vector<Hours> residual_capacity_;
  Matrix<Hours> residual_demand_;
  Rational residual_budget_;
  std::vector<Hours> patient_hours_;
  Matrix<Hours> pair_hours_;
  std::vector<Hours> patient_links_;
  std::vector<Hours> caregiver_links_;

  Assignment best_;
  double best_objective_ = 0.0;
  std::uint64_t nodes_ = 0;
  SolveStatus status_ = SolveStatus::ProvenOptimal;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace detail

/// Depth-first branch and bound over the hour entries in row-major order,
/// trying hour values from high to low. Among optima within the objective
/// tolerance the lexicographically smallest tensor is returned. When a limit
/// is hit the best incumbent so far is returned with a non-optimal status;
/// the zero assignment is always available as an incumbent.
inline OptimalSolution solve_exact(const Instance& inst, const PenaltyWeights& weights, const SolveLimits& limits = {}) {
  validate(inst);
  validate(weights);
  validate(limits);
  return detail::BranchAndBound(inst, weights, limits).run();
}

class SearchSpaceTooLarge : public std::length_error {
 public:
  using std::length_error::length_error;
};

inline constexpr std::uint64_t enumeration_limit = 10'000'000;

namespace detail {

/// Calls visit(x) for every tensor with 0 <= x[i][j][k] <= e[i][k] min(H[i], D[j][k]),
/// in ascending lexicographic order. Returns the number of tensors visited.
inline std::uint64_t for_each_candidate(const Instance& inst, const std::function<void(const Assignment&)>& visit) {
  Assignment x = Assignment::zeros_like(inst);
  std::vector<Hours> upper(x.flat().size(), 0);
  std::uint64_t space = 1;
  for (std::size_t i = 0; i < inst.n; ++i) {
    for (std::size_t j = 0; j < inst.m; ++j) {
      for (std::size_t k = 0; k < inst.s; ++k) {
        const Hours b = inst.skilled(i, k) ? std::min(inst.capacity[i], inst.demand[j][k]) : 0;
        upper[x.index(i, j, k)] = b;
        space *= static_cast<std::uint64_t>(b + 1);
        if (space > enumeration_limit) {
          throw SearchSpaceTooLarge("enumeration space exceeds " + std::to_string(enumeration_limit) + " tensors");
        }
      }
    }
  }

  auto digits = x.flat();
  std::uint64_t visited = 0;
  while (true) {
    visit(x);
    ++visited;
    std::size_t pos = digits.size();
    while (pos > 0) {
      --pos;
      if (digits[pos] < upper[pos]) {
        ++digits[pos];
        break;
      }
      digits[pos] = 0;
      if (pos == 0) return visited;
    }
    if (digits.empty()) return visited;
  }
}

}  // namespace detail

/// Brute-force reference: every tensor within per-entry bounds is filtered
/// through check_feasibility and scored with evaluate_objective. Ties go to
/// the lexicographically smallest tensor.
inline OptimalSolution enumerate_all(const Instance& inst, const PenaltyWeights& weights) {
  validate(inst);
  validate(weights);
  OptimalSolution out;
  bool found = false;
  double best = 0.0;
  out.nodes_explored = detail::for_each_candidate(inst, [&](const Assignment& x) {
    if (!check_feasibility(inst, x).ok()) return;
    const double value = evaluate_objective(inst, weights, x);
    if (!found || value > best + objective_tolerance) {
      found = true;
      best = value;
      out.assignment = x;
    }
  });
  out.metrics = compute_metrics(inst, weights, out.assignment);
  out.status = SolveStatus::ProvenOptimal;
  return out;
}

struct OptimalSet {
  double objective = 0.0;
  std::vector<Assignment> assignments;  // ascending lexicographic order
};

/// Every feasible tensor whose objective is within tolerance of the maximum.
inline OptimalSet enumerate_optimal_set(const Instance& inst, const PenaltyWeights& weights) {
  validate(inst);
  validate(weights);
  OptimalSet out;
  bool found = false;
  detail::for_each_candidate(inst, [&](const Assignment& x) {
    if (!check_feasibility(inst, x).ok()) return;
    const double value = evaluate_objective(inst, weights, x);
    if (!found || value > out.objective + objective_tolerance) {
      found = true;
      out.objective = value;
      out.assignments.assign(1, x);
    } else if (value >= out.objective - objective_tolerance) {
      out.assignments.push_back(x);
    }
  });
  return out;
}

}  // namespace hhcare
