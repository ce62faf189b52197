#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "hhcare/greedy.hpp"
#include "hhcare/model.hpp"

namespace hhcare {

struct TabuParams {
  std::chrono::duration<double> time_limit{10.0};
  std::size_t tenure = 7;
  /// Consecutive non-improving iterations before stopping; 50 * (n + m) when unset.
  std::optional<std::size_t> max_stall;
  std::uint64_t seed = 0;
  /// Aggregate fill cap used by the closing filler sweep.
  Rational beta_target{1};
};

inline void validate(const TabuParams& p) {
  if (!(p.time_limit.count() > 0.0)) throw ValidationError("time_limit", "must be positive");
  if (p.tenure < 1) throw ValidationError("tenure", "must be at least 1");
  if (p.max_stall && *p.max_stall < 1) throw ValidationError("max_stall", "must be at least 1");
  if (!(p.beta_target > 0) || p.beta_target > 1) throw ValidationError("beta_target", "must lie in (0, 1]");
}

enum class MoveKind {
  Insert,      // one new hour of service k from caregiver i to patient j
  Reallocate,  // one hour of (j, k) moves from caregiver `source` to caregiver i
  Rebalance,   // one hour of caregiver i moves from patient `source` to patient j
};

inline const char* to_string(MoveKind k) {
  switch (k) {
    case MoveKind::Insert: return "insert";
    case MoveKind::Reallocate: return "reallocate";
    case MoveKind::Rebalance: return "rebalance";
  }
  return "unknown";
}

struct Move {
  MoveKind kind = MoveKind::Insert;
  std::size_t caregiver = 0;
  std::size_t patient = 0;
  std::size_t service = 0;
  std::size_t source = 0;  // unused for inserts
  double objective = 0.0;  // objective after the move
  double delta = 0.0;

  friend bool operator==(const Move&, const Move&) = default;
};

inline void apply_move(Assignment& x, const Move& mv) {
  switch (mv.kind) {
    case MoveKind::Insert:
      x.add(mv.caregiver, mv.patient, mv.service, 1);
      break;
    case MoveKind::Reallocate:
      x.add(mv.source, mv.patient, mv.service, -1);
      x.add(mv.caregiver, mv.patient, mv.service, 1);
      break;
    case MoveKind::Rebalance:
      x.add(mv.caregiver, mv.source, mv.service, -1);
      x.add(mv.caregiver, mv.patient, mv.service, 1);
      break;
  }
}

namespace detail {

/// Aggregates of a working assignment that let a single-hour move be checked
/// and scored in O(n + m).
class MoveEvaluator {
 public:
  MoveEvaluator(const Instance& inst, const PenaltyWeights& w, Assignment x) : inst_(inst), x_(std::move(x)) {
    theta_ = w.theta.to_double();
    alpha_ = w.alpha.to_double();
    utility_.resize(inst.m);
    demand_total_.resize(inst.m);
    for (std::size_t j = 0; j < inst.m; ++j) {
      utility_[j] = inst.utility[j].to_double();
      demand_total_[j] = inst.total_demand(j);
    }
    rebuild();
  }

  const Assignment& assignment() const { return x_; }
  double objective() const { return objective_; }

  /// Recomputes every aggregate from the hour tensor.
  void rebuild() {
    patient_hours_.assign(inst_.m, 0);
    caregiver_hours_.assign(inst_.n, 0);
    pair_hours_.assign(inst_.n, std::vector<Hours>(inst_.m, 0));
    patient_links_.assign(inst_.m, 0);
    caregiver_links_.assign(inst_.n, 0);
    demand_left_ = inst_.demand;
    for (std::size_t i = 0; i < inst_.n; ++i) {
      for (std::size_t j = 0; j < inst_.m; ++j) {
        for (std::size_t k = 0; k < inst_.s; ++k) {
          const Hours h = x_(i, j, k);
          pair_hours_[i][j] += h;
          demand_left_[j][k] -= h;
        }
        patient_hours_[j] += pair_hours_[i][j];
        caregiver_hours_[i] += pair_hours_[i][j];
        if (pair_hours_[i][j] > 0) {
          ++patient_links_[j];
          ++caregiver_links_[i];
        }
      }
    }
    cost_ = total_cost(inst_, x_);
    objective_ = score();
  }

  Hours capacity_left(std::size_t i) const { return inst_.capacity[i] - caregiver_hours_[i]; }
  Hours demand_left(std::size_t j, std::size_t k) const { return demand_left_[j][k]; }

  Rational fill_rate(std::size_t j) const {
    return demand_total_[j] > 0 ? Rational(patient_hours_[j], demand_total_[j]) : Rational(1);
  }

  /// All feasible single-hour moves that bring caregiver i's time to patient j.
  void generate(std::size_t j, std::size_t i, std::vector<Move>& out) {
    const Rational& budget = inst_.budget;
    const bool linked = pair_hours_[i][j] > 0;
    const bool patient_slot = patient_links_[j] < inst_.max_caregivers_per_patient[j];
    const bool caregiver_slot = caregiver_links_[i] < inst_.max_patients_per_caregiver[i];

    if (capacity_left(i) >= 1) {
      for (std::size_t k = 0; k < inst_.s; ++k) {
        if (!inst_.skilled(i, k) || demand_left_[j][k] < 1) continue;
        if (!linked && !(patient_slot && caregiver_slot)) continue;
        if (cost_ + inst_.cost(i, j, k) > budget) continue;
        push(out, Move{MoveKind::Insert, i, j, k, i});
      }

      for (std::size_t k = 0; k < inst_.s; ++k) {
        if (!inst_.skilled(i, k)) continue;
        for (std::size_t from = 0; from < inst_.n; ++from) {
          if (from == i || x_(from, j, k) < 1) continue;
          const Hours dropped = pair_hours_[from][j] == 1 ? 1 : 0;
          const Hours added = linked ? 0 : 1;
          if (patient_links_[j] + added - dropped > inst_.max_caregivers_per_patient[j]) continue;
          if (caregiver_links_[i] + added > inst_.max_patients_per_caregiver[i]) continue;
          if (cost_ - inst_.cost(from, j, k) + inst_.cost(i, j, k) > budget) continue;
          push(out, Move{MoveKind::Reallocate, i, j, k, from});
        }
      }
    }

    std::optional<std::size_t> donor;
    for (std::size_t other = 0; other < inst_.m; ++other) {
      if (other == j || pair_hours_[i][other] == 0) continue;
      if (!donor || fill_rate(other) > fill_rate(*donor)) donor = other;
    }
    if (!donor) return;
    const Hours dropped = pair_hours_[i][*donor] == 1 ? 1 : 0;
    const Hours added = linked ? 0 : 1;
    if (patient_links_[j] + added > inst_.max_caregivers_per_patient[j]) return;
    if (caregiver_links_[i] + added - dropped > inst_.max_patients_per_caregiver[i]) return;
    for (std::size_t k = 0; k < inst_.s; ++k) {
      if (x_(i, *donor, k) < 1 || demand_left_[j][k] < 1 || !inst_.skilled(i, k)) continue;
      if (cost_ - inst_.cost(i, *donor, k) + inst_.cost(i, j, k) > budget) continue;
      push(out, Move{MoveKind::Rebalance, i, j, k, *donor});
    }
  }

  void apply(const Move& mv) {
    shift(mv, +1);
    apply_move(x_, mv);
    objective_ = score();
  }

 private:
  void push(std::vector<Move>& out, Move mv) {
    shift(mv, +1);
    mv.objective = score();
    shift(mv, -1);
    mv.delta = mv.objective - objective_;
    out.push_back(mv);
  }

  /// Moves the aggregates (not the tensor) by `dir` applications of `mv`.
  void shift(const Move& mv, int dir) {
    const Hours d = dir;
    auto bump = [&](std::size_t i, std::size_t j, std::size_t k, Hours h) {
      const bool was = pair_hours_[i][j] > 0;
      pair_hours_[i][j] += h;
      patient_hours_[j] += h;
      caregiver_hours_[i] += h;
      demand_left_[j][k] -= h;
      cost_ += inst_.cost(i, j, k) * Rational(h);
      const bool now = pair_hours_[i][j] > 0;
      if (was != now) {
        patient_links_[j] += now ? 1 : -1;
        caregiver_links_[i] += now ? 1 : -1;
      }
    };
    switch (mv.kind) {
      case MoveKind::Insert:
        bump(mv.caregiver, mv.patient, mv.service, d);
        break;
      case MoveKind::Reallocate:
        bump(mv.source, mv.patient, mv.service, -d);
        bump(mv.caregiver, mv.patient, mv.service, d);
        break;
      case MoveKind::Rebalance:
        bump(mv.caregiver, mv.source, mv.service, -d);
        bump(mv.caregiver, mv.patient, mv.service, d);
        break;
    }
  }

  double score() const {
    double utility = 0.0;
    double max_fill = 0.0;
    for (std::size_t j = 0; j < inst_.m; ++j) {
      if (demand_total_[j] == 0) {
        utility += utility_[j];
        continue;
      }
      const double fill = static_cast<double>(patient_hours_[j]) / static_cast<double>(demand_total_[j]);
      utility += utility_[j] * fill;
      max_fill = std::max(max_fill, fill);
    }
    double equity = 0.0;
    if (theta_ != 0.0) {
      for (std::size_t j = 0; j < inst_.m; ++j) {
        if (demand_total_[j] == 0) continue;
        equity += theta_ * (max_fill - static_cast<double>(patient_hours_[j]) / static_cast<double>(demand_total_[j]));
      }
    }
    double efficacy = 0.0;
    if (alpha_ != 0.0) {
      double max_util = 0.0;
      for (std::size_t i = 0; i < inst_.n; ++i) {
        if (inst_.capacity[i] > 0) {
          max_util = std::max(max_util, static_cast<double>(caregiver_hours_[i]) / static_cast<double>(inst_.capacity[i]));
        }
      }
      for (std::size_t i = 0; i < inst_.n; ++i) {
        if (inst_.capacity[i] == 0) continue;
        efficacy += alpha_ * (max_util - static_cast<double>(caregiver_hours_[i]) / static_cast<double>(inst_.capacity[i]));
      }
    }
    return utility - equity - efficacy;
  }

  const Instance& inst_;
  Assignment x_;
  double theta_ = 0.0;
  double alpha_ = 0.0;
  std::vector<double> utility_;
  std::vector<Hours> demand_total_;

  std::vector<Hours> patient_hours_;
  std::vector<Hours> caregiver_hours_;
  Matrix<Hours> pair_hours_;
  std::vector<Hours> patient_links_;
  std::vector<Hours> caregiver_links_;
  Matrix<Hours> demand_left_;
  Rational cost_;
  double objective_ = 0.0;
};

}  // namespace detail

/// Single-hour moves that bring caregiver i's time to patient j, each scored
/// by the objective it leads to. Every returned move yields an assignment
/// that passes check_feasibility.
inline std::vector<Move> neighborhood(const Instance& inst, const PenaltyWeights& weights, const Assignment& current,
                                      std::size_t patient, std::size_t caregiver) {
  expect_dimensions(inst, current);
  detail::MoveEvaluator eval(inst, weights, current);
  std::vector<Move> moves;
  eval.generate(patient, caregiver, moves);
  std::erase_if(moves, [&](const Move& mv) {
    Assignment next = current;
    apply_move(next, mv);
    return !check_feasibility(inst, next).ok();
  });
  return moves;
}

enum class TabuStop { TimeLimit, StallLimit, NoUnderservedPatient, NoSpareCaregiver, NoAdmissibleMove };

inline const char* to_string(TabuStop s) {
  switch (s) {
    case TabuStop::TimeLimit: return "time-limit";
    case TabuStop::StallLimit: return "stall-limit";
    case TabuStop::NoUnderservedPatient: return "no-underserved-patient";
    case TabuStop::NoSpareCaregiver: return "no-spare-caregiver";
    case TabuStop::NoAdmissibleMove: return "no-admissible-move";
  }
  return "unknown";
}

/// One accepted move of the search trajectory.
struct TabuStep {
  std::size_t iteration = 0;
  Move move;
  bool was_tabu = false;
  double incumbent_before = 0.0;
};

struct TabuResult {
  Assignment incumbent;
  double objective = 0.0;
  std::size_t iterations = 0;
  TabuStop stop = TabuStop::NoUnderservedPatient;
  bool filler_accepted = false;
  /// Iteration until which each caregiver / patient stays tabu (exclusive).
  std::vector<std::size_t> caregiver_tabu_until;
  std::vector<std::size_t> patient_tabu_until;
};

/// Tabu search from a feasible assignment.
///
/// Each iteration targets the patients whose fill-rate is below the best
/// one, lowest first, and the caregivers with spare hours, sorted for each
/// patient by min(spare hours, skilled residual demand) descending. The best
/// move over all such pairs is applied; a move whose caregiver or patient is
/// tabu qualifies only when it beats the incumbent. Equal-scoring moves are
/// drawn uniformly with the seeded generator. The touched caregiver and
/// patient then stay tabu for `tenure` iterations. After the search a greedy
/// filler sweep runs on the incumbent and is kept only if it does not lower
/// the objective.
inline TabuResult tabu_search(const Instance& inst, const PenaltyWeights& weights, const Assignment& initial,
                              const TabuParams& params,
                              const std::function<void(const TabuStep&)>& observer = nullptr) {
  validate(inst);
  validate(weights);
  validate(params);
  expect_dimensions(inst, initial);
  if (!check_feasibility(inst, initial).ok()) throw ValidationError("initial", "assignment is infeasible");

  const std::size_t max_stall = params.max_stall.value_or(50 * (inst.n + inst.m));
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(params.seed);

  TabuResult result;
  result.incumbent = initial;
  result.objective = evaluate_objective(inst, weights, initial);
  result.caregiver_tabu_until.assign(inst.n, 0);
  result.patient_tabu_until.assign(inst.m, 0);

  detail::MoveEvaluator eval(inst, weights, initial);
  std::size_t stall = 0;
  std::size_t iteration = 0;
  std::vector<Move> moves;

  while (true) {
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    if (elapsed >= params.time_limit) {
      result.stop = TabuStop::TimeLimit;
      break;
    }

    Rational best_fill(0);
    for (std::size_t j = 0; j < inst.m; ++j) {
      if (patient_included(inst, j)) best_fill = std::max(best_fill, eval.fill_rate(j));
    }
    std::vector<std::size_t> patients;
    for (std::size_t j = 0; j < inst.m; ++j) {
      if (patient_included(inst, j) && eval.fill_rate(j) < best_fill) patients.push_back(j);
    }
    if (patients.empty()) {
      result.stop = TabuStop::NoUnderservedPatient;
      break;
    }
    std::stable_sort(patients.begin(), patients.end(),
                     [&](std::size_t a, std::size_t b) { return eval.fill_rate(a) < eval.fill_rate(b); });

    std::vector<std::size_t> caregivers;
    for (std::size_t i = 0; i < inst.n; ++i) {
      if (eval.capacity_left(i) > 0) caregivers.push_back(i);
    }
    if (caregivers.empty()) {
      result.stop = TabuStop::NoSpareCaregiver;
      break;
    }

    std::optional<Move> chosen;
    bool chosen_tabu = false;
    std::uint64_t ties = 0;
    for (std::size_t j : patients) {
      auto key = [&](std::size_t i) {
        Hours skilled_demand = 0;
        for (std::size_t k = 0; k < inst.s; ++k) {
          if (inst.skilled(i, k)) skilled_demand += eval.demand_left(j, k);
        }
        return std::min(eval.capacity_left(i), skilled_demand);
      };
      std::vector<std::size_t> order = caregivers;
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return key(a) > key(b); });

      for (std::size_t i : order) {
        moves.clear();
        eval.generate(j, i, moves);
        const bool tabu = iteration < result.caregiver_tabu_until[i] || iteration < result.patient_tabu_until[j];
        for (const Move& mv : moves) {
          if (tabu && !(mv.objective > result.objective + objective_tolerance)) continue;
          if (!chosen || mv.objective > chosen->objective + objective_tolerance) {
            chosen = mv;
            chosen_tabu = tabu;
            ties = 1;
          } else if (mv.objective >= chosen->objective - objective_tolerance) {
            ++ties;
            if (rng() % ties == 0) {
              chosen = mv;
              chosen_tabu = tabu;
            }
          }
        }
      }
    }
    if (!chosen) {
      result.stop = TabuStop::NoAdmissibleMove;
      break;
    }

    if (observer) observer(TabuStep{iteration, *chosen, chosen_tabu, result.objective});
    eval.apply(*chosen);
    result.caregiver_tabu_until[chosen->caregiver] = iteration + 1 + params.tenure;
    result.patient_tabu_until[chosen->patient] = iteration + 1 + params.tenure;
    ++iteration;
    if (iteration % 100 == 0) eval.rebuild();

    if (!check_feasibility(inst, eval.assignment()).ok()) {
      throw std::logic_error("tabu move produced an infeasible assignment");
    }
    if (eval.objective() > result.objective + objective_tolerance) {
      result.incumbent = eval.assignment();
      result.objective = evaluate_objective(inst, weights, result.incumbent);
      stall = 0;
    } else if (++stall >= max_stall) {
      result.stop = TabuStop::StallLimit;
      break;
    }
  }
  result.iterations = iteration;

  GreedyState st = greedy_state_from(inst, result.incumbent, params.beta_target);
  Assignment filled = result.incumbent;
  greedy_fill(inst, st, filled);
  if (filled != result.incumbent && check_feasibility(inst, filled).ok()) {
    const double value = evaluate_objective(inst, weights, filled);
    if (value >= result.objective) {
      result.incumbent = std::move(filled);
      result.objective = value;
      result.filler_accepted = true;
    }
  }
  return result;
}

/// Improved assignment; never worse than `initial`.
inline Assignment tabu_improve(const Instance& inst, const PenaltyWeights& weights, const Assignment& initial,
                               const TabuParams& params = {}) {
  return tabu_search(inst, weights, initial, params).incumbent;
}

}  // namespace hhcare
