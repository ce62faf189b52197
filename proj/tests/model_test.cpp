#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "hhcare/model.hpp"
#include "test_support.hpp"

namespace hhcare {
namespace {

Instance one_by_two() {
  Instance inst = make_instance(1, 2, 1);
  inst.skills = {{1}};
  inst.demand = {{1}, {1}};
  inst.capacity = {1};
  inst.max_patients_per_caregiver = {2};
  inst.utility = {Rational(10), Rational(10)};
  inst.unit_cost[0] = {{Rational(1)}, {Rational(1)}};
  inst.budget = Rational(5);
  return inst;
}

TEST(FillRates, ZeroAssignmentLeavesEveryPatientUnserved) {
  const Instance inst = testing::micro_instance(3);
  const auto beta = fill_rates(inst, Assignment::zeros_like(inst));
  for (std::size_t j = 0; j < inst.m; ++j) {
    EXPECT_EQ(beta[j], patient_included(inst, j) ? Rational(0) : Rational(1));
  }
}

TEST(FillRates, FullServiceGivesOne) {
  Instance inst = make_instance(1, 2, 2);
  inst.demand = {{1, 2}, {3, 0}};
  Assignment x = Assignment::zeros_like(inst);
  for (std::size_t j = 0; j < 2; ++j) {
    for (std::size_t k = 0; k < 2; ++k) x.set(0, j, k, inst.demand[j][k]);
  }
  for (const Rational& b : fill_rates(inst, x)) EXPECT_EQ(b, Rational(1));
}

TEST(FillRates, PartialServiceIsHoursOverDemand) {
  Instance inst = make_instance(2, 1, 2);
  inst.demand = {{2, 2}};
  Assignment x = Assignment::zeros_like(inst);
  x.set(0, 0, 0, 1);
  x.set(1, 0, 1, 2);
  EXPECT_EQ(fill_rates(inst, x)[0], Rational(3, 4));
}

TEST(FillRates, ZeroDemandPatientCountsAsServedAndIsExcluded) {
  Instance inst = make_instance(1, 2, 1);
  inst.demand = {{0}, {2}};
  const auto beta = fill_rates(inst, Assignment::zeros_like(inst));
  EXPECT_EQ(beta[0], Rational(1));
  EXPECT_FALSE(patient_included(inst, 0));
  EXPECT_TRUE(patient_included(inst, 1));
}

TEST(FillRates, DimensionMismatchThrows) {
  const Instance inst = make_instance(1, 2, 1);
  EXPECT_THROW(fill_rates(inst, Assignment(1, 3, 1)), DimensionError);
  EXPECT_THROW(utilizations(inst, Assignment(2, 2, 1)), DimensionError);
  EXPECT_THROW(evaluate_objective(inst, {}, Assignment(1, 2, 2)), DimensionError);
}

TEST(Utilizations, Basics) {
  Instance inst = make_instance(3, 2, 1);
  inst.capacity = {8, 10, 0};
  Assignment x = Assignment::zeros_like(inst);
  EXPECT_EQ(utilizations(inst, x), std::vector<Rational>(3, Rational(0)));
  x.set(0, 0, 0, 5);
  x.set(0, 1, 0, 3);
  x.set(1, 0, 0, 1);
  x.set(1, 1, 0, 3);
  const auto u = utilizations(inst, x);
  EXPECT_EQ(u[0], Rational(1));
  EXPECT_EQ(u[1], Rational(2, 5));
  EXPECT_EQ(u[2], Rational(0));
  EXPECT_FALSE(caregiver_included(inst, 2));
}

TEST(Feasibility, ZeroAssignmentIsFeasible) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Instance inst = testing::sized_instance(seed, 5, 6, 3);
    EXPECT_TRUE(check_feasibility(inst, Assignment::zeros_like(inst)).ok());
  }
}

TEST(Feasibility, SkillGateViolationIsLocated) {
  Instance inst = one_by_two();
  inst.skills = {{0}};
  Assignment x = Assignment::zeros_like(inst);
  x.set(0, 0, 0, 1);
  const FeasibilityReport r = check_feasibility(inst, x);
  ASSERT_FALSE(r.ok());
  EXPECT_TRUE(r.violates(Constraint::SkillGate));
  const Violation expected{Constraint::SkillGate, 0, 0, 0};
  EXPECT_NE(std::find(r.violations.begin(), r.violations.end(), expected), r.violations.end());
}

TEST(Feasibility, BudgetExceededByOneUnitCost) {
  Instance inst = one_by_two();
  inst.capacity = {2};
  inst.unit_cost[0] = {{Rational(5, 2)}, {Rational(5, 2)}};
  Assignment x = Assignment::zeros_like(inst);
  x.set(0, 0, 0, 1);
  x.set(0, 1, 0, 1);
  // 2.5 + 2.5 = 5 fits a budget of 5; one unit cost less does not.
  EXPECT_TRUE(check_feasibility(inst, x).ok());
  inst.budget = Rational(5) - Rational(5, 2);
  const FeasibilityReport r = check_feasibility(inst, x);
  EXPECT_TRUE(r.violates(Constraint::Budget));
  EXPECT_EQ(r.violations.size(), 1U);
}

TEST(Feasibility, EachConstraintIsDetected) {
  Instance inst = make_instance(2, 2, 1);
  inst.skills = {{1}, {1}};
  inst.demand = {{2}, {2}};
  inst.capacity = {2, 2};
  inst.budget = Rational(100);

  Assignment over_demand = Assignment::zeros_like(inst);
  over_demand.set(0, 0, 0, 2);
  over_demand.set(1, 0, 0, 1);
  inst.max_caregivers_per_patient = {2, 2};
  EXPECT_TRUE(check_feasibility(inst, over_demand).violates(Constraint::DemandCap));

  inst.max_caregivers_per_patient = {1, 1};
  Assignment two_caregivers = Assignment::zeros_like(inst);
  two_caregivers.set(0, 0, 0, 1);
  two_caregivers.set(1, 0, 0, 1);
  EXPECT_TRUE(check_feasibility(inst, two_caregivers).violates(Constraint::PatientCaregiverLimit));

  Assignment two_patients = Assignment::zeros_like(inst);
  two_patients.set(0, 0, 0, 1);
  two_patients.set(0, 1, 0, 1);
  EXPECT_TRUE(check_feasibility(inst, two_patients).violates(Constraint::CaregiverPatientLimit));

  inst.max_patients_per_caregiver = {2, 2};
  Assignment over_hours = Assignment::zeros_like(inst);
  over_hours.set(0, 0, 0, 2);
  over_hours.set(0, 1, 0, 1);
  const FeasibilityReport r = check_feasibility(inst, over_hours);
  EXPECT_TRUE(r.violates(Constraint::CaregiverHours));
  EXPECT_FALSE(r.violates(Constraint::SkillGate));

  Assignment negative = Assignment::zeros_like(inst);
  negative.set(0, 0, 0, -1);
  EXPECT_TRUE(check_feasibility(inst, negative).violates(Constraint::NonNegativeHours));
}

TEST(Objective, PenaltiesOffAndFullServiceGivesTotalUtility) {
  Instance inst = one_by_two();
  inst.capacity = {2};
  Assignment x = Assignment::zeros_like(inst);
  x.set(0, 0, 0, 1);
  x.set(0, 1, 0, 1);
  EXPECT_DOUBLE_EQ(evaluate_objective(inst, {}, x), 20.0);
}

TEST(Objective, TwoPatientHandEvaluation) {
  Instance inst = one_by_two();
  Assignment x = Assignment::zeros_like(inst);
  x.set(0, 0, 0, 1);
  const PenaltyWeights w{Rational(3), Rational(0)};
  EXPECT_NEAR(evaluate_objective(inst, w, x), 7.0, objective_tolerance);
  const SolutionMetrics m = compute_metrics(inst, w, x);
  EXPECT_EQ(m.max_fill, Rational(1));
  EXPECT_EQ(m.max_util, Rational(1));
  EXPECT_NEAR(m.equity_penalty, 3.0, objective_tolerance);
}

TEST(Objective, ExcludedEntitiesCarryNoPenalty) {
  Instance inst = make_instance(2, 2, 1);
  inst.skills = {{1}, {1}};
  inst.demand = {{2}, {0}};
  inst.capacity = {2, 0};
  inst.utility = {Rational(4), Rational(3)};
  inst.budget = Rational(10);
  Assignment x = Assignment::zeros_like(inst);
  x.set(0, 0, 0, 1);
  const PenaltyWeights w{Rational(50), Rational(50)};
  // Only one included patient and one included caregiver: both penalty sums vanish.
  EXPECT_NEAR(evaluate_objective(inst, w, x), 4.0 * 0.5 + 3.0, objective_tolerance);
}

class ObjectiveProperties : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(ObjectiveProperties, HoldOnRandomFeasibleAssignments) {
  std::mt19937_64 rng(GetParam());
  const Instance inst = testing::sized_instance(GetParam(), 4, 5, 3);
  int checked = 0;
  for (int trial = 0; trial < 200 && checked < 40; ++trial) {
    const Assignment x = trial == 0 ? Assignment::zeros_like(inst) : testing::random_assignment(inst, rng);
    if (!check_feasibility(inst, x).ok()) continue;
    ++checked;

    const SolutionMetrics m = compute_metrics(inst, {}, x);
    for (std::size_t j = 0; j < inst.m; ++j) {
      EXPECT_GE(m.fill_rate[j], Rational(0));
      EXPECT_LE(m.fill_rate[j], Rational(1));
      if (patient_included(inst, j)) {
        EXPECT_GE(m.max_fill, m.fill_rate[j]);
      }
    }
    for (std::size_t i = 0; i < inst.n; ++i) {
      EXPECT_GE(m.utilization[i], Rational(0));
      EXPECT_LE(m.utilization[i], Rational(1));
      if (caregiver_included(inst, i)) {
        EXPECT_GE(m.max_util, m.utilization[i]);
      }
    }

    double utility = 0.0;
    for (std::size_t j = 0; j < inst.m; ++j) utility += inst.utility[j].to_double() * m.fill_rate[j].to_double();
    EXPECT_NEAR(evaluate_objective(inst, {}, x), utility, objective_tolerance);

    double previous = evaluate_objective(inst, {}, x);
    for (int t : {1, 2, 10, 100}) {
      const double value = evaluate_objective(inst, {Rational(t), Rational(0)}, x);
      EXPECT_LE(value, previous + objective_tolerance);
      previous = value;
    }
    previous = evaluate_objective(inst, {}, x);
    for (int a : {1, 2, 10, 100}) {
      const double value = evaluate_objective(inst, {Rational(0), Rational(a)}, x);
      EXPECT_LE(value, previous + objective_tolerance);
      previous = value;
    }

    Instance scaled = inst;
    for (Rational& p : scaled.utility) p *= Rational(3);
    EXPECT_NEAR(evaluate_objective(scaled, {}, x), 3.0 * evaluate_objective(inst, {}, x), objective_tolerance);

    const Matrix<int> z = x.links();
    for (std::size_t i = 0; i < inst.n; ++i) {
      for (std::size_t j = 0; j < inst.m; ++j) EXPECT_EQ(z[i][j] == 1, x.pair_hours(i, j) >= 1);
    }
  }
  EXPECT_GT(checked, 1) << "too few feasible samples";
}

INSTANTIATE_TEST_SUITE_P(Seeds, ObjectiveProperties, ::testing::Range<std::uint64_t>(0, 20));

TEST(Objective, EqualRatesMeanNoPenalty) {
  Instance inst = make_instance(2, 2, 1);
  inst.skills = {{1}, {1}};
  inst.demand = {{2}, {4}};
  inst.capacity = {2, 2};
  inst.utility = {Rational(3), Rational(5)};
  inst.max_caregivers_per_patient = {2, 2};
  inst.max_patients_per_caregiver = {2, 2};
  inst.budget = Rational(100);
  Assignment x = Assignment::zeros_like(inst);
  x.set(0, 0, 0, 1);
  x.set(1, 1, 0, 2);
  // beta = (1/2, 1/2), u = (1/2, 1).
  const SolutionMetrics m = compute_metrics(inst, {Rational(7), Rational(0)}, x);
  EXPECT_EQ(m.equity_penalty, 0.0);
  EXPECT_NEAR(m.objective, 3.0 * 0.5 + 5.0 * 0.5, objective_tolerance);
  x.set(0, 0, 0, 0);
  x.set(0, 1, 0, 2);
  x.set(1, 1, 0, 2);
  const SolutionMetrics m2 = compute_metrics(inst, {Rational(0), Rational(9)}, x);
  EXPECT_EQ(m2.efficacy_penalty, 0.0);
}

TEST(Validation, NamesTheOffendingField) {
  Instance inst = one_by_two();
  inst.demand[1][0] = -1;
  try {
    validate(inst);
    FAIL() << "expected a validation error";
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.field(), "demand[1][0]");
  }
  inst = one_by_two();
  inst.unit_cost[0].pop_back();
  EXPECT_THROW(validate(inst), DimensionError);
  inst = one_by_two();
  inst.max_caregivers_per_patient[0] = 0;
  EXPECT_THROW(validate(inst), ValidationError);
  EXPECT_THROW(validate(PenaltyWeights{Rational(-1), Rational(0)}), ValidationError);
}

}  // namespace
}  // namespace hhcare
