#include <gtest/gtest.h>

#include <sstream>

#include "hhcare/bench.hpp"
#include "test_support.hpp"

namespace hhcare {
namespace {

RunOptions fast_options() {
  RunOptions opt;
  opt.time_limit = std::chrono::duration<double>(30.0);
  return opt;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

TEST(Algorithms, ParseAndName) {
  for (Algorithm a : {Algorithm::Exact, Algorithm::Greedy, Algorithm::Tabu}) EXPECT_EQ(parse_algorithm(to_string(a)), a);
  EXPECT_THROW(parse_algorithm("simplex"), ValidationError);
}

TEST(FormatDecimal, NineDigitsWithoutNegativeZero) {
  EXPECT_EQ(format_decimal(1.0 / 3.0), "0.333333333");
  EXPECT_EQ(format_decimal(-1e-12), "0.000000000");
  EXPECT_EQ(format_decimal(Rational(-5, 4)), "-1.250000000");
}

TEST(Sweep, SinglePointMatchesSolve) {
  const Instance inst = testing::micro_instance(12);
  SweepGrid grid{{Rational(2)}, {Rational(1)}, {}, {Algorithm::Exact}};
  const auto rows = sweep(inst, grid, fast_options());
  ASSERT_EQ(rows.size(), 1U);
  const RunResult run = run_algorithm(inst, {Rational(2), Rational(1)}, Algorithm::Exact, fast_options());
  EXPECT_EQ(rows[0].objective, run.metrics.objective);
  EXPECT_EQ(rows[0].total_cost, run.metrics.total_cost);
  EXPECT_EQ(rows[0].budget, inst.budget);
}

TEST(Sweep, OrderingAndShape) {
  const Instance inst = testing::micro_instance(5);
  SweepGrid grid{{Rational(0), Rational(5)}, {Rational(0), Rational(1), Rational(2)}, {Rational(1), Rational(4)},
                 {Algorithm::Tabu, Algorithm::Greedy, Algorithm::Exact}};
  const auto rows = sweep(inst, grid, fast_options());
  ASSERT_EQ(rows.size(), 2U * 3U * 2U * 3U);
  EXPECT_EQ(rows[0].algorithm, Algorithm::Exact);
  EXPECT_EQ(rows[1].algorithm, Algorithm::Greedy);
  EXPECT_EQ(rows[2].algorithm, Algorithm::Tabu);
  EXPECT_EQ(rows[3].budget, Rational(4));
  EXPECT_EQ(rows.back().theta, Rational(5));
  for (const SweepRow& r : rows) {
    EXPECT_GE(r.balance.equity_spread, 0.0);
    EXPECT_GE(r.balance.efficacy_spread, 0.0);
  }
  const auto csv = lines(sweep_csv(rows, false));
  EXPECT_EQ(csv.size(), rows.size() + 1);
  EXPECT_EQ(csv[0].substr(0, 17), "theta,alpha,budge");
  EXPECT_EQ(sweep_csv(rows, false), sweep_csv(sweep(inst, grid, fast_options()), false));
  EXPECT_THROW(sweep(inst, SweepGrid{{}, {Rational(0)}, {}, {Algorithm::Greedy}}, fast_options()), ValidationError);
}

TEST(Sweep, ExactObjectiveNonIncreasingAlongTheta) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Instance inst = testing::micro_instance(seed);
    SweepGrid grid{{Rational(0), Rational(1000)}, {Rational(0)}, {}, {Algorithm::Exact}};
    const auto rows = sweep(inst, grid, fast_options());
    EXPECT_LE(rows[1].objective, rows[0].objective + objective_tolerance);
  }
}

TEST(Balance, SpreadsVanishWhenRatesAreEqual) {
  Instance inst = make_instance(2, 2, 1);
  inst.skills = {{1}, {1}};
  inst.demand = {{2}, {2}};
  inst.capacity = {2, 2};
  inst.budget = Rational(10);
  Assignment x = Assignment::zeros_like(inst);
  x.set(0, 0, 0, 1);
  x.set(1, 1, 0, 1);
  const BalanceSummary b = summarize_balance(inst, compute_metrics(inst, {}, x));
  EXPECT_EQ(b.equity_spread, 0.0);
  EXPECT_EQ(b.efficacy_spread, 0.0);
  EXPECT_EQ(b.mean_fill, 0.5);
  EXPECT_EQ(b.min_util, 0.5);
}

TEST(Compare, GapsOnMicroInstances) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Instance inst = testing::micro_instance(seed);
    ASSERT_TRUE(is_micro(inst));
    const auto rows = compare(inst, {Rational(1), Rational(1)}, fast_options(), true);
    ASSERT_EQ(rows.size(), 3U);
    for (const CompareRow& r : rows) {
      ASSERT_TRUE(r.gap.has_value());
      EXPECT_GE(*r.gap, -objective_tolerance);
    }
    EXPECT_LE(*rows[1].gap, *rows[0].gap + objective_tolerance);
    EXPECT_EQ(*rows[2].gap, 0.0);
  }
}

TEST(Compare, GreedyOptimalMeansZeroGaps) {
  Instance inst = make_instance(1, 1, 1);
  inst.skills = {{1}};
  inst.demand = {{3}};
  inst.capacity = {3};
  inst.budget = Rational(10);
  inst.utility = {Rational(4)};
  const auto rows = compare(inst, {}, fast_options(), true);
  for (const CompareRow& r : rows) EXPECT_EQ(*r.gap, 0.0);
  const auto csv = lines(compare_csv(rows, false));
  ASSERT_EQ(csv.size(), 4U);
  EXPECT_EQ(csv[1], "greedy,4.000000000,0.000000000,heuristic,0.000000000");
}

TEST(Compare, WithoutExactLeavesGapEmpty) {
  const Instance inst = testing::sized_instance(3, 8, 12, 4);
  const auto rows = compare(inst, {}, fast_options(), false);
  ASSERT_EQ(rows.size(), 2U);
  EXPECT_FALSE(rows[0].gap.has_value());
  EXPECT_NE(lines(compare_csv(rows, false))[1].find(",,"), std::string::npos);
}

}  // namespace
}  // namespace hhcare
