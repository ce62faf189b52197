#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "hhcare/model.hpp"

namespace hhcare {

struct KnapsackInstance {
  std::vector<Rational> values;
  std::vector<Rational> weights;
  Rational capacity;
};

inline void validate(const KnapsackInstance& kp) {
  if (kp.values.size() != kp.weights.size()) {
    throw DimensionError("weights", "knapsack needs one weight per value");
  }
  for (std::size_t j = 0; j < kp.values.size(); ++j) {
    if (kp.values[j] < 0) throw ValidationError(detail::idx("values", j), "must be non-negative");
    if (kp.weights[j] < 0) throw ValidationError(detail::idx("weights", j), "must be non-negative");
  }
  if (kp.capacity < 0) throw ValidationError("capacity", "must be non-negative");
}

/// One caregiver and one service; every item becomes a patient demanding a
/// single hour, worth its value and costing its weight, under a budget equal
/// to the knapsack capacity. Penalties are switched off, so the optimal
/// objective equals the knapsack optimum.
inline std::pair<Instance, PenaltyWeights> knapsack_to_assignment(const KnapsackInstance& kp) {
  validate(kp);
  const std::size_t items = kp.values.size();
  Instance inst = make_instance(1, items, 1);
  inst.skills[0][0] = 1;
  inst.capacity[0] = static_cast<Hours>(items);
  inst.max_patients_per_caregiver[0] = std::max<Hours>(1, static_cast<Hours>(items));
  inst.budget = kp.capacity;
  for (std::size_t j = 0; j < items; ++j) {
    inst.demand[j][0] = 1;
    inst.max_caregivers_per_patient[j] = 1;
    inst.utility[j] = kp.values[j];
    inst.unit_cost[0][j][0] = kp.weights[j];
  }
  return {std::move(inst), PenaltyWeights{Rational(0), Rational(0)}};
}

/// Item j is packed exactly when the single caregiver gives patient j its hour.
inline std::vector<bool> extract_knapsack_solution(const Assignment& x) {
  if (x.n() != 1 || x.s() != 1) throw std::invalid_argument("assignment does not come from a knapsack reduction");
  std::vector<bool> selection(x.m(), false);
  for (std::size_t j = 0; j < x.m(); ++j) {
    const Hours h = x(0, j, 0);
    if (h < 0 || h > 1) throw std::invalid_argument("assignment does not come from a knapsack reduction");
    selection[j] = h == 1;
  }
  return selection;
}

struct KnapsackSolution {
  Rational value;
  std::vector<bool> selection;
};

inline constexpr std::size_t knapsack_bruteforce_limit = 20;

/// Tries all 2^items subsets. Among equal values the lexicographically
/// smallest selection vector (item 0 first, unpacked before packed) wins.
inline KnapsackSolution solve_knapsack_bruteforce(const KnapsackInstance& kp) {
  validate(kp);
  const std::size_t items = kp.values.size();
  if (items > knapsack_bruteforce_limit) throw std::length_error("too many items for exhaustive knapsack search");

  auto selection_of = [items](std::uint32_t mask) {
    std::vector<bool> sel(items, false);
    for (std::size_t j = 0; j < items; ++j) sel[j] = ((mask >> (items - 1 - j)) & 1U) != 0;
    return sel;
  };

  // Bit (items - 1 - j) holds item j, so increasing masks are increasing
  // selection vectors and the first maximum found is the smallest one.
  KnapsackSolution best{Rational(0), std::vector<bool>(items, false)};
  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << items); ++mask) {
    Rational value(0);
    Rational weight(0);
    for (std::size_t j = 0; j < items; ++j) {
      if (((mask >> (items - 1 - j)) & 1U) == 0) continue;
      value += kp.values[j];
      weight += kp.weights[j];
    }
    if (weight <= kp.capacity && value > best.value) best = {value, selection_of(mask)};
  }
  return best;
}

}  // namespace hhcare
