#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "hhcare/model.hpp"

namespace hhcare {

/// Working state of the two-phase greedy construction. Residual quantities
/// start at the instance data and are consumed as hours are assigned.
struct GreedyState {
  Rational residual_budget;
  std::vector<Hours> residual_capacity;            // H_i
  Matrix<Hours> residual_demand;                   // D_jk
  std::vector<Rational> residual_patient_demand;   // aggregate D_j, reduced by assigned/beta
  std::vector<Rational> residual_utility;          // p_j
  std::vector<Hours> remaining_caregiver_slots;    // M_i
  std::vector<Hours> remaining_patient_slots;      // N_j

  Rational c0;     // budget per unit of utility; 0 when total utility is 0
  Rational c_min;  // smallest unit cost over all (i, j, k)

  std::vector<std::set<std::size_t>> served_by;   // patients served by caregiver i
  std::vector<std::set<std::size_t>> servers_of;  // caregivers serving patient j
  std::vector<bool> phase1_used;

  std::vector<bool> active_caregivers;
  std::vector<bool> active_patients;
  std::vector<std::size_t> patient_order;  // by p_j / sum_k D_jk descending

  Rational beta_target{1};
};

/// Patients with demand, sorted by utility per demanded hour (descending),
/// ties by index.
inline std::vector<std::size_t> greedy_patient_order(const Instance& inst) {
  std::vector<std::size_t> order;
  for (std::size_t j = 0; j < inst.m; ++j) {
    if (inst.total_demand(j) > 0) order.push_back(j);
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return inst.utility[a] / Rational(inst.total_demand(a)) > inst.utility[b] / Rational(inst.total_demand(b));
  });
  return order;
}

/// Fresh state for `inst` with nothing assigned.
inline GreedyState make_greedy_state(const Instance& inst, const Rational& beta_target) {
  GreedyState st;
  st.beta_target = beta_target;
  st.residual_budget = inst.budget;
  st.residual_capacity = inst.capacity;
  st.residual_demand = inst.demand;
  st.residual_utility = inst.utility;
  st.remaining_caregiver_slots = inst.max_patients_per_caregiver;
  st.remaining_patient_slots = inst.max_caregivers_per_patient;
  st.residual_patient_demand.resize(inst.m);
  for (std::size_t j = 0; j < inst.m; ++j) st.residual_patient_demand[j] = Rational(inst.total_demand(j));

  const Rational total_utility = std::accumulate(inst.utility.begin(), inst.utility.end(), Rational(0));
  st.c0 = total_utility.is_zero() ? Rational(0) : inst.budget / total_utility;
  bool first = true;
  for (const auto& per_patient : inst.unit_cost) {
    for (const auto& per_service : per_patient) {
      for (const Rational& c : per_service) {
        if (first || c < st.c_min) st.c_min = c;
        first = false;
      }
    }
  }

  st.served_by.assign(inst.n, {});
  st.servers_of.assign(inst.m, {});
  st.phase1_used.assign(inst.n, false);
  st.active_caregivers.assign(inst.n, true);
  st.patient_order = greedy_patient_order(inst);
  st.active_patients.assign(inst.m, false);
  for (std::size_t j : st.patient_order) st.active_patients[j] = true;
  return st;
}

/// Most hours caregiver i can give patient j in one step: per service at most
/// the residual demand (and only with the skill), in total at most the
/// residual capacity and floor(beta * D_j), all within the residual budget.
/// Every hour is worth the same, so filling the cheapest services first is
/// optimal. Ties in cost go to the lower service index.
inline std::vector<Hours> greedy_subproblem(const Instance& inst, std::size_t i, std::size_t j,
                                            const GreedyState& st) {
  std::vector<Hours> hours(inst.s, 0);
  const Hours capacity = st.residual_capacity[i];
  Hours aggregate = std::min(capacity, (st.beta_target * st.residual_patient_demand[j]).floor());
  if (aggregate <= 0) return hours;

  std::vector<std::size_t> services(inst.s);
  std::iota(services.begin(), services.end(), std::size_t{0});
  std::stable_sort(services.begin(), services.end(),
                   [&](std::size_t a, std::size_t b) { return inst.cost(i, j, a) < inst.cost(i, j, b); });

  Rational budget = st.residual_budget;
  for (std::size_t k : services) {
    if (aggregate == 0) break;
    if (!inst.skilled(i, k)) continue;
    Hours take = std::min({capacity, st.residual_demand[j][k], aggregate});
    const Rational& unit = inst.cost(i, j, k);
    if (!unit.is_zero()) take = std::min(take, (budget / unit).floor());
    if (take <= 0) continue;
    hours[k] = take;
    aggregate -= take;
    budget -= unit * Rational(take);
  }
  return hours;
}

namespace detail {

inline Hours sum(const std::vector<Hours>& v) { return std::accumulate(v.begin(), v.end(), Hours{0}); }

inline Rational hours_cost(const Instance& inst, std::size_t i, std::size_t j, const std::vector<Hours>& hours) {
  Rational c(0);
  for (std::size_t k = 0; k < inst.s; ++k) {
    if (hours[k] != 0) c += inst.cost(i, j, k) * Rational(hours[k]);
  }
  return c;
}

/// State updates shared by both phases once caregiver i gives `hours` to j.
inline void commit(const Instance& inst, GreedyState& st, Assignment& x, std::size_t i, std::size_t j,
                   const std::vector<Hours>& hours, const Rational& cost) {
  const Hours total = sum(hours);
  if (!st.served_by[i].contains(j)) {
    st.remaining_caregiver_slots[i] -= 1;
    st.remaining_patient_slots[j] -= 1;
  }
  st.residual_budget -= cost;
  st.residual_patient_demand[j] -= Rational(total) / st.beta_target;
  for (std::size_t k = 0; k < inst.s; ++k) {
    x.add(i, j, k, hours[k]);
    st.residual_demand[j][k] -= hours[k];
  }
  st.residual_capacity[i] -= total;
  st.served_by[i].insert(j);
  st.servers_of[j].insert(i);
}

inline Hours residual_total_demand(const GreedyState& st, std::size_t j) { return sum(st.residual_demand[j]); }

}  // namespace detail

/// Second sweep: every active patient in order is offered to every active
/// caregiver, with no limit of one caregiver per patient. Also used as the
/// final filler pass of the tabu search.
inline void greedy_fill(const Instance& inst, GreedyState& st, Assignment& x) {
  for (std::size_t j : st.patient_order) {
    if (!st.active_patients[j]) continue;
    const bool any_caregiver = std::find(st.active_caregivers.begin(), st.active_caregivers.end(), true) !=
                               st.active_caregivers.end();
    if (st.residual_budget <= st.c_min || !any_caregiver) break;
    for (std::size_t i = 0; i < inst.n; ++i) {
      if (!st.active_caregivers[i]) continue;
      const std::vector<Hours> hours = greedy_subproblem(inst, i, j, st);
      if (detail::sum(hours) <= 0) continue;
      detail::commit(inst, st, x, i, j, hours, detail::hours_cost(inst, i, j, hours));
      if (st.remaining_caregiver_slots[i] == 0 || st.residual_capacity[i] == 0) st.active_caregivers[i] = false;
      if (st.remaining_patient_slots[j] == 0 || detail::residual_total_demand(st, j) == 0 ||
          st.residual_budget <= st.c_min) {
        st.active_patients[j] = false;
        break;
      }
    }
  }
}

/// Two-phase greedy construction of a feasible starting assignment.
///
/// Phase one visits patients by utility per demanded hour and gives each at
/// most one fresh caregiver, preferring the candidate with the largest
/// partial utility p' whose cost stays within p' * c0. If no candidate passes
/// that cost test, the largest p' seen at no more than the running best cost
/// wins. A patient with no candidate is skipped untouched. Phase two is
/// greedy_fill.
inline std::pair<Assignment, GreedyState> greedy_construct(const Instance& inst, const Rational& beta_target = Rational(1)) {
  validate(inst);
  if (!(beta_target > 0) || beta_target > 1) throw ValidationError("beta_target", "must lie in (0, 1]");

  GreedyState st = make_greedy_state(inst, beta_target);
  Assignment x = Assignment::zeros_like(inst);
  if (inst.n == 0 || inst.m == 0 || inst.s == 0) return {std::move(x), std::move(st)};

  std::size_t used = 0;
  for (std::size_t j : st.patient_order) {
    if (!st.active_patients[j]) continue;
    bool flag = false;
    std::optional<std::size_t> chosen;
    std::vector<Hours> best_hours(inst.s, 0);
    Rational best_utility(0);
    std::optional<Rational> best_cost;  // empty means +infinity

    const Rational demand_j(detail::residual_total_demand(st, j));
    for (std::size_t i = 0; i < inst.n; ++i) {
      if (!st.active_caregivers[i] || st.phase1_used[i]) continue;
      std::vector<Hours> hours = greedy_subproblem(inst, i, j, st);
      const Rational partial_utility = Rational(detail::sum(hours)) / demand_j * st.residual_utility[j];
      const Rational cost = detail::hours_cost(inst, i, j, hours);
      const bool efficient = partial_utility > best_utility && cost <= partial_utility * st.c0;
      const bool fallback = !flag && partial_utility > best_utility && (!best_cost || cost <= *best_cost);
      if (!efficient && !fallback) continue;
      flag = flag || efficient;
      chosen = i;
      best_hours = std::move(hours);
      best_utility = partial_utility;
      best_cost = cost;
    }
    if (!chosen) continue;

    const std::size_t i = *chosen;
    detail::commit(inst, st, x, i, j, best_hours, *best_cost);
    st.residual_utility[j] -= best_utility;
    st.phase1_used[i] = true;
    ++used;

    if (st.remaining_caregiver_slots[i] == 0 || st.residual_capacity[i] == 0) st.active_caregivers[i] = false;
    if (st.remaining_patient_slots[j] == 0 || detail::residual_total_demand(st, j) == 0) st.active_patients[j] = false;
    if (st.residual_budget <= st.c_min || used == inst.n) break;
  }

  greedy_fill(inst, st, x);
  return {std::move(x), std::move(st)};
}

/// Rebuilds the greedy bookkeeping for an arbitrary feasible assignment so
/// that greedy_fill can continue from it. Slot counters are reduced by the
/// number of existing links.
inline GreedyState greedy_state_from(const Instance& inst, const Assignment& x, const Rational& beta_target) {
  GreedyState st = make_greedy_state(inst, beta_target);
  if (inst.n == 0 || inst.m == 0 || inst.s == 0) return st;
  st.residual_budget -= total_cost(inst, x);
  for (std::size_t i = 0; i < inst.n; ++i) {
    for (std::size_t j = 0; j < inst.m; ++j) {
      const Hours h = x.pair_hours(i, j);
      if (h == 0) continue;
      st.remaining_caregiver_slots[i] -= 1;
      st.remaining_patient_slots[j] -= 1;
      st.residual_capacity[i] -= h;
      st.residual_patient_demand[j] -= Rational(h) / beta_target;
      st.served_by[i].insert(j);
      st.servers_of[j].insert(i);
      for (std::size_t k = 0; k < inst.s; ++k) st.residual_demand[j][k] -= x(i, j, k);
    }
  }
  for (std::size_t i = 0; i < inst.n; ++i) {
    st.active_caregivers[i] = st.remaining_caregiver_slots[i] > 0 && st.residual_capacity[i] > 0;
  }
  for (std::size_t j : st.patient_order) {
    st.active_patients[j] = st.remaining_patient_slots[j] > 0 && detail::residual_total_demand(st, j) > 0;
  }
  return st;
}

}  // namespace hhcare
