#include <gtest/gtest.h>

#include "hhcare/exact.hpp"
#include "hhcare/greedy.hpp"
#include "test_support.hpp"

namespace hhcare {
namespace {

TEST(GreedySubproblem, CheapestServicesFirst) {
  Instance inst = make_instance(1, 1, 3);
  inst.skills = {{1, 1, 1}};
  inst.demand = {{2, 2, 2}};
  inst.capacity = {4};
  inst.unit_cost[0][0] = {Rational(2), Rational(1), Rational(5)};
  inst.budget = Rational(6);
  const GreedyState st = make_greedy_state(inst, Rational(1));
  EXPECT_EQ(greedy_subproblem(inst, 0, 0, st), (std::vector<Hours>{2, 2, 0}));
  EXPECT_EQ(testing::subproblem_bruteforce(inst, 0, 0, st), 4);
}

TEST(GreedySubproblem, ZeroBudget) {
  Instance inst = make_instance(1, 1, 2);
  inst.skills = {{1, 1}};
  inst.demand = {{3, 1}};
  inst.capacity = {4};
  inst.unit_cost[0][0] = {Rational(1), Rational(1, 2)};
  EXPECT_EQ(greedy_subproblem(inst, 0, 0, make_greedy_state(inst, Rational(1))), (std::vector<Hours>{0, 0}));
}

TEST(GreedySubproblem, DemandCapsBindUnderAmpleBudget) {
  Instance inst = make_instance(1, 1, 3);
  inst.skills = {{1, 1, 1}};
  inst.demand = {{1, 0, 3}};
  inst.capacity = {10};
  inst.unit_cost[0][0] = {Rational(3), Rational(1), Rational(2)};
  inst.budget = Rational(1000);
  EXPECT_EQ(greedy_subproblem(inst, 0, 0, make_greedy_state(inst, Rational(1))), (std::vector<Hours>{1, 0, 3}));
}

TEST(GreedySubproblem, MatchesBruteForceOnRandomSubproblems) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t s = testing::pick(rng, 1, 4);
    Instance inst = make_instance(1, 1, s);
    for (std::size_t k = 0; k < s; ++k) {
      inst.skills[0][k] = rng() % 4 == 0 ? 0 : 1;
      inst.demand[0][k] = static_cast<Hours>(rng() % 6);
      inst.unit_cost[0][0][k] = Rational(static_cast<std::int64_t>(rng() % 13), 2);
    }
    inst.capacity = {static_cast<Hours>(rng() % 12)};
    inst.budget = Rational(static_cast<std::int64_t>(rng() % 40), 2);
    const Rational beta(static_cast<std::int64_t>(1 + rng() % 4), 4);
    const GreedyState st = make_greedy_state(inst, beta);
    const std::vector<Hours> x = greedy_subproblem(inst, 0, 0, st);
    Hours total = 0;
    for (Hours h : x) total += h;
    EXPECT_EQ(total, testing::subproblem_bruteforce(inst, 0, 0, st)) << "trial " << trial;
  }
}

TEST(GreedyConstruct, SingleCandidate) {
  Instance inst = make_instance(1, 1, 1);
  inst.skills = {{1}};
  inst.demand = {{4}};
  inst.capacity = {4};
  inst.unit_cost[0][0][0] = Rational(1);
  inst.budget = Rational(100);
  inst.utility = {Rational(3)};
  const auto [x, st] = greedy_construct(inst);
  EXPECT_EQ(x(0, 0, 0), 4);
  EXPECT_EQ(fill_rates(inst, x)[0], Rational(1));
}

TEST(GreedyConstruct, ZeroBudgetGivesZeroAssignment) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Instance inst = testing::sized_instance(seed, 6, 8, 3);
    inst.budget = Rational(0);
    EXPECT_EQ(greedy_construct(inst).first, Assignment::zeros_like(inst));
  }
}

TEST(GreedyConstruct, RejectsBadBetaTarget) {
  const Instance inst = testing::micro_instance(1);
  EXPECT_THROW(greedy_construct(inst, Rational(0)), ValidationError);
  EXPECT_THROW(greedy_construct(inst, Rational(3, 2)), ValidationError);
}

TEST(GreedyConstruct, PhaseOneUsesOneCaregiverPerPatient) {
  Instance inst = make_instance(2, 1, 1);
  inst.skills = {{1}, {1}};
  inst.demand = {{4}};
  inst.capacity = {2, 2};
  inst.max_caregivers_per_patient = {2};
  inst.unit_cost[0][0][0] = Rational(1);
  inst.unit_cost[1][0][0] = Rational(1);
  inst.budget = Rational(100);
  inst.utility = {Rational(8)};
  const auto [x, st] = greedy_construct(inst);
  EXPECT_EQ(std::count(st.phase1_used.begin(), st.phase1_used.end(), true), 1);
  EXPECT_TRUE(st.phase1_used[0]);
  EXPECT_EQ(x(0, 0, 0), 2);
  EXPECT_EQ(x(1, 0, 0), 2);
}

TEST(GreedyConstruct, PhaseOneNeverReusesACaregiver) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const Instance inst = testing::sized_instance(seed, 5, 8, 3);
    const auto [x, st] = greedy_construct(inst);
    const auto used = static_cast<std::size_t>(std::count(st.phase1_used.begin(), st.phase1_used.end(), true));
    EXPECT_LE(used, std::min(inst.n, st.patient_order.size()));
    for (std::size_t i = 0; i < inst.n; ++i) {
      if (st.phase1_used[i]) {
        EXPECT_FALSE(st.served_by[i].empty());
      }
      for (std::size_t j : st.served_by[i]) EXPECT_TRUE(st.servers_of[j].contains(i));
    }
    for (std::size_t j = 0; j < inst.m; ++j) {
      for (std::size_t k = 0; k < inst.s; ++k) EXPECT_GE(st.residual_demand[j][k], 0);
    }
    for (std::size_t i = 0; i < inst.n; ++i) EXPECT_GE(st.residual_capacity[i], 0);
    EXPECT_GE(st.residual_budget, Rational(0));
  }
}

TEST(GreedyConstruct, PatientOrderFollowsUtilityPerHour) {
  Instance inst = make_instance(1, 4, 1);
  inst.demand = {{2}, {0}, {1}, {4}};
  inst.utility = {Rational(4), Rational(9), Rational(2), Rational(8)};
  EXPECT_EQ(greedy_patient_order(inst), (std::vector<std::size_t>{0, 2, 3}));
}

class GreedyProperties : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(GreedyProperties, FeasibleBoundedByExactAndDeterministic) {
  const Instance inst = testing::micro_instance(GetParam());
  const Assignment x = greedy_construct(inst).first;
  EXPECT_TRUE(check_feasibility(inst, x).ok());
  const PenaltyWeights w{Rational(1), Rational(1, 2)};
  const double value = evaluate_objective(inst, w, x);
  EXPECT_LE(value, solve_exact(inst, w).objective() + objective_tolerance);
  EXPECT_EQ(greedy_construct(inst).first, x);
}

TEST_P(GreedyProperties, FeasibleOnLargerInstances) {
  const Instance inst = testing::sized_instance(GetParam(), 10, 20, 6);
  for (const Rational& beta : {Rational(1), Rational(1, 2), Rational(1, 3)}) {
    const FeasibilityReport r = check_feasibility(inst, greedy_construct(inst, beta).first);
    EXPECT_TRUE(r.ok()) << to_string(r.violations.front().constraint);
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, GreedyProperties, ::testing::Range<std::uint64_t>(0, 60));

TEST(GreedyConstruct, ThreeByThreeByTwoWithinExactOptimum) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    GeneratorParams p = testing::micro_params(seed);
    p.n = 3;
    p.m = 3;
    p.s = 2;
    p.demand = {0, 1};
    p.capacity = {0, 2};
    const Instance inst = generate(p);
    const double value = evaluate_objective(inst, {}, greedy_construct(inst).first);
    const OptimalSolution opt = solve_exact(inst, {});
    ASSERT_EQ(opt.status, SolveStatus::ProvenOptimal);
    EXPECT_GE(value, -objective_tolerance);
    EXPECT_LE(value, opt.objective() + objective_tolerance);
  }
}

TEST(GreedyStateFrom, MatchesConstructionBookkeeping) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const Instance inst = testing::sized_instance(seed, 4, 6, 3);
    const auto [x, st] = greedy_construct(inst);
    const GreedyState rebuilt = greedy_state_from(inst, x, Rational(1));
    EXPECT_EQ(rebuilt.residual_budget, st.residual_budget);
    EXPECT_EQ(rebuilt.residual_capacity, st.residual_capacity);
    EXPECT_EQ(rebuilt.residual_demand, st.residual_demand);
    EXPECT_EQ(rebuilt.served_by, st.served_by);
    // A second fill pass over a finished construction adds nothing new.
    GreedyState again = rebuilt;
    Assignment y = x;
    greedy_fill(inst, again, y);
    EXPECT_TRUE(check_feasibility(inst, y).ok());
  }
}

}  // namespace
}  // namespace hhcare
