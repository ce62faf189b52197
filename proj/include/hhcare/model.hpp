#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hhcare/rational.hpp"

namespace hhcare {

using Hours = std::int64_t;

template <class T>
using Matrix = std::vector<std::vector<T>>;

/// Thrown when problem data breaks an invariant. field() names the offending
/// entry, e.g. "demand[2][0]".
class ValidationError : public std::invalid_argument {
 public:
  ValidationError(std::string field, const std::string& reason)
      : std::invalid_argument(field + ": " + reason), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

class DimensionError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Caregivers i < n, patients j < m, services k < s.
struct Instance {
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t s = 0;
  Matrix<int> skills;                           // n x s, entries 0/1
  Matrix<Hours> demand;                         // m x s
  std::vector<Hours> capacity;                  // n
  std::vector<Hours> max_caregivers_per_patient;  // m
  std::vector<Hours> max_patients_per_caregiver;  // n
  std::vector<Matrix<Rational>> unit_cost;      // n x m x s
  Rational budget;
  std::vector<Rational> utility;                // m

  const Rational& cost(std::size_t i, std::size_t j, std::size_t k) const { return unit_cost[i][j][k]; }
  bool skilled(std::size_t i, std::size_t k) const { return skills[i][k] != 0; }

  Hours total_demand(std::size_t j) const {
    Hours total = 0;
    for (Hours d : demand[j]) total += d;
    return total;
  }

  friend bool operator==(const Instance&, const Instance&) = default;
};

/// Correctly sized instance with zero data, unit cardinality limits and
/// zero budget. Callers fill in the fields they care about.
inline Instance make_instance(std::size_t n, std::size_t m, std::size_t s) {
  Instance inst;
  inst.n = n;
  inst.m = m;
  inst.s = s;
  inst.skills.assign(n, std::vector<int>(s, 0));
  inst.demand.assign(m, std::vector<Hours>(s, 0));
  inst.capacity.assign(n, 0);
  inst.max_caregivers_per_patient.assign(m, 1);
  inst.max_patients_per_caregiver.assign(n, 1);
  inst.unit_cost.assign(n, Matrix<Rational>(m, std::vector<Rational>(s, Rational(0))));
  inst.utility.assign(m, Rational(0));
  return inst;
}

namespace detail {

inline std::string idx(const std::string& name, std::size_t a) { return name + "[" + std::to_string(a) + "]"; }
inline std::string idx(const std::string& name, std::size_t a, std::size_t b) {
  return idx(name, a) + "[" + std::to_string(b) + "]";
}
inline std::string idx(const std::string& name, std::size_t a, std::size_t b, std::size_t c) {
  return idx(name, a, b) + "[" + std::to_string(c) + "]";
}

template <class T>
void expect_size(const std::vector<T>& v, std::size_t size, const std::string& field) {
  if (v.size() != size) {
    throw DimensionError(field, "expected " + std::to_string(size) + " entries, got " + std::to_string(v.size()));
  }
}

}  // namespace detail

inline void validate(const Instance& inst) {
  using detail::expect_size;
  using detail::idx;

  expect_size(inst.skills, inst.n, "skills");
  for (std::size_t i = 0; i < inst.n; ++i) {
    expect_size(inst.skills[i], inst.s, idx("skills", i));
    for (std::size_t k = 0; k < inst.s; ++k) {
      if (inst.skills[i][k] != 0 && inst.skills[i][k] != 1) throw ValidationError(idx("skills", i, k), "must be 0 or 1");
    }
  }
  expect_size(inst.demand, inst.m, "demand");
  for (std::size_t j = 0; j < inst.m; ++j) {
    expect_size(inst.demand[j], inst.s, idx("demand", j));
    for (std::size_t k = 0; k < inst.s; ++k) {
      if (inst.demand[j][k] < 0) throw ValidationError(idx("demand", j, k), "must be non-negative");
    }
  }
  expect_size(inst.capacity, inst.n, "capacity");
  for (std::size_t i = 0; i < inst.n; ++i) {
    if (inst.capacity[i] < 0) throw ValidationError(idx("capacity", i), "must be non-negative");
  }
  expect_size(inst.max_caregivers_per_patient, inst.m, "max_caregivers_per_patient");
  for (std::size_t j = 0; j < inst.m; ++j) {
    if (inst.max_caregivers_per_patient[j] < 1) {
      throw ValidationError(idx("max_caregivers_per_patient", j), "must be at least 1");
    }
  }
  expect_size(inst.max_patients_per_caregiver, inst.n, "max_patients_per_caregiver");
  for (std::size_t i = 0; i < inst.n; ++i) {
    if (inst.max_patients_per_caregiver[i] < 1) {
      throw ValidationError(idx("max_patients_per_caregiver", i), "must be at least 1");
    }
  }
  expect_size(inst.unit_cost, inst.n, "unit_cost");
  for (std::size_t i = 0; i < inst.n; ++i) {
    expect_size(inst.unit_cost[i], inst.m, idx("unit_cost", i));
    for (std::size_t j = 0; j < inst.m; ++j) {
      expect_size(inst.unit_cost[i][j], inst.s, idx("unit_cost", i, j));
      for (std::size_t k = 0; k < inst.s; ++k) {
        if (inst.unit_cost[i][j][k] < 0) throw ValidationError(idx("unit_cost", i, j, k), "must be non-negative");
      }
    }
  }
  if (inst.budget < 0) throw ValidationError("budget", "must be non-negative");
  expect_size(inst.utility, inst.m, "utility");
  for (std::size_t j = 0; j < inst.m; ++j) {
    if (inst.utility[j] < 0) throw ValidationError(idx("utility", j), "must be non-negative");
  }
}

/// theta penalizes each patient's shortfall from the best fill-rate, alpha
/// each caregiver's shortfall from the highest utilization.
struct PenaltyWeights {
  Rational theta{0};
  Rational alpha{0};

  friend bool operator==(const PenaltyWeights&, const PenaltyWeights&) = default;
};

inline void validate(const PenaltyWeights& w) {
  if (w.theta < 0) throw ValidationError("theta", "must be non-negative");
  if (w.alpha < 0) throw ValidationError("alpha", "must be non-negative");
}

/// Integer hour tensor x[i][j][k], stored row-major. The caregiver-patient
/// link z[i][j] is never stored: it is 1 exactly when the pair shares at
/// least one hour.
class Assignment {
 public:
  Assignment() = default;
  Assignment(std::size_t n, std::size_t m, std::size_t s) : n_(n), m_(m), s_(s), hours_(n * m * s, 0) {}

  static Assignment zeros_like(const Instance& inst) { return Assignment(inst.n, inst.m, inst.s); }

  std::size_t n() const { return n_; }
  std::size_t m() const { return m_; }
  std::size_t s() const { return s_; }

  std::size_t index(std::size_t i, std::size_t j, std::size_t k) const { return (i * m_ + j) * s_ + k; }

  Hours operator()(std::size_t i, std::size_t j, std::size_t k) const { return hours_[index(i, j, k)]; }
  void set(std::size_t i, std::size_t j, std::size_t k, Hours h) { hours_[index(i, j, k)] = h; }
  void add(std::size_t i, std::size_t j, std::size_t k, Hours h) { hours_[index(i, j, k)] += h; }

  std::span<const Hours> flat() const { return hours_; }
  std::span<Hours> flat() { return hours_; }

  Hours pair_hours(std::size_t i, std::size_t j) const {
    Hours total = 0;
    for (std::size_t k = 0; k < s_; ++k) total += (*this)(i, j, k);
    return total;
  }
  bool link(std::size_t i, std::size_t j) const { return pair_hours(i, j) >= 1; }

  Matrix<int> links() const {
    Matrix<int> z(n_, std::vector<int>(m_, 0));
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < m_; ++j) z[i][j] = link(i, j) ? 1 : 0;
    }
    return z;
  }

  Hours patient_hours(std::size_t j) const {
    Hours total = 0;
    for (std::size_t i = 0; i < n_; ++i) total += pair_hours(i, j);
    return total;
  }
  Hours caregiver_hours(std::size_t i) const {
    Hours total = 0;
    for (std::size_t j = 0; j < m_; ++j) total += pair_hours(i, j);
    return total;
  }

  bool matches(const Instance& inst) const { return n_ == inst.n && m_ == inst.m && s_ == inst.s; }

  friend bool operator==(const Assignment&, const Assignment&) = default;
  /// Dimensions first, then lexicographic over the row-major hours.
  friend auto operator<=>(const Assignment&, const Assignment&) = default;

 private:
  std::size_t n_ = 0;
  std::size_t m_ = 0;
  std::size_t s_ = 0;
  std::vector<Hours> hours_;
};

inline void expect_dimensions(const Instance& inst, const Assignment& x) {
  if (!x.matches(inst)) {
    throw DimensionError("hours", "assignment is " + std::to_string(x.n()) + "x" + std::to_string(x.m()) + "x" +
                                      std::to_string(x.s()) + " but instance is " + std::to_string(inst.n) + "x" +
                                      std::to_string(inst.m) + "x" + std::to_string(inst.s));
  }
}

/// Patients with no demand take no part in the equity term.
inline bool patient_included(const Instance& inst, std::size_t j) { return inst.total_demand(j) > 0; }
/// Caregivers with no capacity take no part in the efficacy term.
inline bool caregiver_included(const Instance& inst, std::size_t i) { return inst.capacity[i] > 0; }

/// Fraction of each patient's total demand that is assigned. A patient with
/// no demand counts as fully served.
inline std::vector<Rational> fill_rates(const Instance& inst, const Assignment& x) {
  expect_dimensions(inst, x);
  std::vector<Rational> beta(inst.m, Rational(1));
  for (std::size_t j = 0; j < inst.m; ++j) {
    const Hours total = inst.total_demand(j);
    if (total > 0) beta[j] = Rational(x.patient_hours(j), total);
  }
  return beta;
}

/// Fraction of each caregiver's capacity in use; 0 for caregivers with no
/// capacity.
inline std::vector<Rational> utilizations(const Instance& inst, const Assignment& x) {
  expect_dimensions(inst, x);
  std::vector<Rational> u(inst.n, Rational(0));
  for (std::size_t i = 0; i < inst.n; ++i) {
    if (inst.capacity[i] > 0) u[i] = Rational(x.caregiver_hours(i), inst.capacity[i]);
  }
  return u;
}

inline Rational total_cost(const Instance& inst, const Assignment& x) {
  expect_dimensions(inst, x);
  Rational cost(0);
  for (std::size_t i = 0; i < inst.n; ++i) {
    for (std::size_t j = 0; j < inst.m; ++j) {
      for (std::size_t k = 0; k < inst.s; ++k) {
        if (x(i, j, k) != 0) cost += inst.cost(i, j, k) * Rational(x(i, j, k));
      }
    }
  }
  return cost;
}

enum class Constraint {
  NonNegativeHours,       // x >= 0
  DemandCap,              // sum_i x[i][j][k] <= D[j][k]
  Budget,                 // sum c x <= C
  SkillGate,              // x[i][j][k] <= e[i][k] z[i][j] H[i]
  LinkSupport,            // z[i][j] <= sum_k x[i][j][k]
  PatientCaregiverLimit,  // sum_i z[i][j] <= N[j]
  CaregiverPatientLimit,  // sum_j z[i][j] <= M[i]
  CaregiverHours,         // sum_jk x[i][j][k] <= H[i]
};

inline const char* to_string(Constraint c) {
  switch (c) {
    case Constraint::NonNegativeHours: return "non-negative-hours";
    case Constraint::DemandCap: return "demand-cap";
    case Constraint::Budget: return "budget";
    case Constraint::SkillGate: return "skill-gate";
    case Constraint::LinkSupport: return "link-support";
    case Constraint::PatientCaregiverLimit: return "patient-caregiver-limit";
    case Constraint::CaregiverPatientLimit: return "caregiver-patient-limit";
    case Constraint::CaregiverHours: return "caregiver-hours";
  }
  return "unknown";
}

struct Violation {
  static constexpr std::size_t none = std::numeric_limits<std::size_t>::max();

  Constraint constraint;
  std::size_t caregiver = none;
  std::size_t patient = none;
  std::size_t service = none;

  friend bool operator==(const Violation&, const Violation&) = default;
};

struct FeasibilityReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool violates(Constraint c) const {
    return std::any_of(violations.begin(), violations.end(), [c](const Violation& v) { return v.constraint == c; });
  }
};

/// Exact check of every model constraint plus the explicit per-caregiver
/// hour cap. Violations are collected, never thrown.
inline FeasibilityReport check_feasibility(const Instance& inst, const Assignment& x) {
  expect_dimensions(inst, x);
  FeasibilityReport report;
  auto flag = [&](Constraint c, std::size_t i, std::size_t j, std::size_t k) {
    report.violations.push_back(Violation{c, i, j, k});
  };
  constexpr auto none = Violation::none;

  for (std::size_t i = 0; i < inst.n; ++i) {
    for (std::size_t j = 0; j < inst.m; ++j) {
      for (std::size_t k = 0; k < inst.s; ++k) {
        if (x(i, j, k) < 0) flag(Constraint::NonNegativeHours, i, j, k);
      }
    }
  }

  for (std::size_t j = 0; j < inst.m; ++j) {
    for (std::size_t k = 0; k < inst.s; ++k) {
      Hours total = 0;
      for (std::size_t i = 0; i < inst.n; ++i) total += x(i, j, k);
      if (total > inst.demand[j][k]) flag(Constraint::DemandCap, none, j, k);
    }
  }

  if (total_cost(inst, x) > inst.budget) flag(Constraint::Budget, none, none, none);

  const Matrix<int> z = x.links();
  for (std::size_t i = 0; i < inst.n; ++i) {
    for (std::size_t j = 0; j < inst.m; ++j) {
      for (std::size_t k = 0; k < inst.s; ++k) {
        if (x(i, j, k) > inst.skills[i][k] * z[i][j] * inst.capacity[i]) flag(Constraint::SkillGate, i, j, k);
      }
      if (z[i][j] > x.pair_hours(i, j)) flag(Constraint::LinkSupport, i, j, none);
    }
  }

  for (std::size_t j = 0; j < inst.m; ++j) {
    Hours caregivers = 0;
    for (std::size_t i = 0; i < inst.n; ++i) caregivers += z[i][j];
    if (caregivers > inst.max_caregivers_per_patient[j]) flag(Constraint::PatientCaregiverLimit, none, j, none);
  }
  for (std::size_t i = 0; i < inst.n; ++i) {
    Hours patients = 0;
    for (std::size_t j = 0; j < inst.m; ++j) patients += z[i][j];
    if (patients > inst.max_patients_per_caregiver[i]) flag(Constraint::CaregiverPatientLimit, i, none, none);
    if (x.caregiver_hours(i) > inst.capacity[i]) flag(Constraint::CaregiverHours, i, none, none);
  }
  return report;
}

struct SolutionMetrics {
  std::vector<Rational> fill_rate;
  std::vector<Rational> utilization;
  Rational max_fill;  // over patients with demand; 0 if there are none
  Rational max_util;  // over caregivers with capacity; 0 if there are none
  Rational total_cost;
  double total_utility = 0.0;     // sum_j p_j beta_j
  double equity_penalty = 0.0;    // theta * sum_j (beta - beta_j)
  double efficacy_penalty = 0.0;  // alpha * sum_i (u - u_i)
  double objective = 0.0;
};

/// Objective terms are formed exactly per entity and summed in double.
inline SolutionMetrics compute_metrics(const Instance& inst, const PenaltyWeights& w, const Assignment& x) {
  SolutionMetrics out;
  out.fill_rate = fill_rates(inst, x);
  out.utilization = utilizations(inst, x);
  out.total_cost = total_cost(inst, x);

  for (std::size_t j = 0; j < inst.m; ++j) {
    if (patient_included(inst, j)) out.max_fill = std::max(out.max_fill, out.fill_rate[j]);
  }
  for (std::size_t i = 0; i < inst.n; ++i) {
    if (caregiver_included(inst, i)) out.max_util = std::max(out.max_util, out.utilization[i]);
  }

  for (std::size_t j = 0; j < inst.m; ++j) {
    out.total_utility += (inst.utility[j] * out.fill_rate[j]).to_double();
    if (patient_included(inst, j) && !w.theta.is_zero()) {
      out.equity_penalty += (w.theta * (out.max_fill - out.fill_rate[j])).to_double();
    }
  }
  for (std::size_t i = 0; i < inst.n; ++i) {
    if (caregiver_included(inst, i) && !w.alpha.is_zero()) {
      out.efficacy_penalty += (w.alpha * (out.max_util - out.utilization[i])).to_double();
    }
  }
  out.objective = out.total_utility - out.equity_penalty - out.efficacy_penalty;
  return out;
}

/// sum_j p_j beta_j - theta sum_j (beta - beta_j) - alpha sum_i (u - u_i)
inline double evaluate_objective(const Instance& inst, const PenaltyWeights& w, const Assignment& x) {
  return compute_metrics(inst, w, x).objective;
}

/// Absolute tolerance used wherever objective values are compared.
inline constexpr double objective_tolerance = 1e-9;

}  // namespace hhcare
