#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <random>

#include "hhcare/model.hpp"

namespace hhcare {

struct IntRange {
  Hours lo = 0;
  Hours hi = 0;
};

struct RationalRange {
  Rational lo;
  Rational hi;
};

/// Knobs for random instances. Draws use only raw 64-bit engine output, so
/// a seed reproduces the same instance on every platform.
struct GeneratorParams {
  std::size_t n = 4;
  std::size_t m = 6;
  std::size_t s = 3;
  IntRange demand{0, 4};
  IntRange capacity{4, 10};
  RationalRange cost{Rational(1), Rational(5)};
  unsigned cost_decimals = 2;
  RationalRange utility{Rational(1), Rational(10)};
  unsigned utility_decimals = 2;
  double skill_density = 0.6;
  /// Budget as a multiple of the cost of covering every demanded hour with
  /// the cheapest skilled caregiver.
  Rational budget_factor{3, 5};
  IntRange caregivers_per_patient{1, 3};
  IntRange patients_per_caregiver{1, 4};
  std::uint64_t seed = 1;
};

inline void validate(const GeneratorParams& p) {
  if (p.n < 1) throw ValidationError("n", "must be at least 1");
  if (p.m < 1) throw ValidationError("m", "must be at least 1");
  if (p.s < 1) throw ValidationError("s", "must be at least 1");
  auto check_int = [](const IntRange& r, const std::string& name, Hours floor) {
    if (r.lo < floor) throw ValidationError(name, "lower end must be at least " + std::to_string(floor));
    if (r.hi < r.lo) throw ValidationError(name, "range is empty");
  };
  check_int(p.demand, "demand_range", 0);
  check_int(p.capacity, "capacity_range", 0);
  check_int(p.caregivers_per_patient, "caregivers_per_patient_range", 1);
  check_int(p.patients_per_caregiver, "patients_per_caregiver_range", 1);
  auto check_rational = [](const RationalRange& r, unsigned decimals, const std::string& name) {
    if (r.lo < 0) throw ValidationError(name, "lower end must be non-negative");
    if (r.hi < r.lo) throw ValidationError(name, "range is empty");
    if (decimals > 6) throw ValidationError(name, "at most 6 decimals are supported");
  };
  check_rational(p.cost, p.cost_decimals, "cost_range");
  check_rational(p.utility, p.utility_decimals, "utility_range");
  if (!(p.skill_density >= 0.0 && p.skill_density <= 1.0)) throw ValidationError("skill_density", "must lie in [0, 1]");
  if (p.budget_factor < 0) throw ValidationError("budget_factor", "must be non-negative");
}

namespace detail {

class Draw {
 public:
  explicit Draw(std::uint64_t seed) : engine_(seed) {}

  /// Uniform integer in [lo, hi] by rejection.
  Hours integer(Hours lo, Hours hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return lo + static_cast<Hours>(engine_());
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % span;
    std::uint64_t v = engine_();
    while (v >= limit) v = engine_();
    return lo + static_cast<Hours>(v % span);
  }

  bool chance(double p) {
    const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return u < p;
  }

  /// Uniform on the grid of `decimals`-digit decimals inside [lo, hi].
  Rational decimal(const RationalRange& r, unsigned decimals) {
    std::int64_t scale = 1;
    for (unsigned d = 0; d < decimals; ++d) scale *= 10;
    const Rational lo_scaled = r.lo * Rational(scale);
    const Rational hi_scaled = r.hi * Rational(scale);
    std::int64_t lo = lo_scaled.floor();
    if (Rational(lo) < lo_scaled) ++lo;
    const std::int64_t hi = hi_scaled.floor();
    if (hi < lo) throw ValidationError("range", "contains no value with the requested decimals");
    return Rational(integer(lo, hi), scale);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace detail

/// Random valid instance, a pure function of `params`. Every caregiver gets
/// at least one skill: an all-zero skill row is redrawn, and after 64 failed
/// redraws a single uniformly chosen skill is switched on.
inline Instance generate(const GeneratorParams& params) {
  validate(params);
  detail::Draw draw(params.seed);
  Instance inst = make_instance(params.n, params.m, params.s);

  for (std::size_t i = 0; i < inst.n; ++i) {
    bool any = false;
    for (int attempt = 0; attempt < 64 && !any; ++attempt) {
      for (std::size_t k = 0; k < inst.s; ++k) {
        inst.skills[i][k] = draw.chance(params.skill_density) ? 1 : 0;
        any = any || inst.skills[i][k] == 1;
      }
    }
    if (!any) inst.skills[i][static_cast<std::size_t>(draw.integer(0, static_cast<Hours>(inst.s) - 1))] = 1;
  }
  for (std::size_t i = 0; i < inst.n; ++i) inst.capacity[i] = draw.integer(params.capacity.lo, params.capacity.hi);
  for (std::size_t i = 0; i < inst.n; ++i) {
    inst.max_patients_per_caregiver[i] = draw.integer(params.patients_per_caregiver.lo, params.patients_per_caregiver.hi);
  }
  for (std::size_t j = 0; j < inst.m; ++j) {
    for (std::size_t k = 0; k < inst.s; ++k) inst.demand[j][k] = draw.integer(params.demand.lo, params.demand.hi);
    inst.max_caregivers_per_patient[j] =
        draw.integer(params.caregivers_per_patient.lo, params.caregivers_per_patient.hi);
    inst.utility[j] = draw.decimal(params.utility, params.utility_decimals);
  }
  for (std::size_t i = 0; i < inst.n; ++i) {
    for (std::size_t j = 0; j < inst.m; ++j) {
      for (std::size_t k = 0; k < inst.s; ++k) inst.unit_cost[i][j][k] = draw.decimal(params.cost, params.cost_decimals);
    }
  }

  Rational full_service(0);
  for (std::size_t j = 0; j < inst.m; ++j) {
    for (std::size_t k = 0; k < inst.s; ++k) {
      if (inst.demand[j][k] == 0) continue;
      std::optional<Rational> cheapest;
      for (std::size_t i = 0; i < inst.n; ++i) {
        if (inst.skilled(i, k) && (!cheapest || inst.cost(i, j, k) < *cheapest)) cheapest = inst.cost(i, j, k);
      }
      if (cheapest) full_service += *cheapest * Rational(inst.demand[j][k]);
    }
  }
  inst.budget = params.budget_factor * full_service;
  validate(inst);
  return inst;
}

}  // namespace hhcare
