#include <gtest/gtest.h>

#include <cmath>

#include "pktgraph/experiment.hpp"
#include "support/fixtures.hpp"

using namespace pktgraph;
using namespace pktgraph::testing;

namespace {

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1));
  return out;
}

}  // namespace

TEST(Fit, ExactPolynomial) {
  const auto t = linspace(1, 100, 50);
  std::vector<double> y;
  for (const double x : t) y.push_back(5.0 * x * x);
  const auto fit = fit_leading_coefficient(t, y, 2, 0.5);
  EXPECT_NEAR(fit.estimate, 5.0, 1e-12);
  EXPECT_LT(fit.std_error, 1e-12);
  EXPECT_EQ(fit.rows, 25u);
}

TEST(Fit, LowerOrderTermWithinOnePercent) {
  const auto t = linspace(0, 1000, 200);
  std::vector<double> y;
  for (const double x : t) y.push_back(5.0 * x * x + 3.0 * x);
  EXPECT_NEAR(fit_leading_coefficient(t, y, 2, 0.5).estimate, 5.0, 0.05);
}

TEST(Fit, ConstantSeriesSlopeVanishes) {
  double previous = 1e9;
  for (const double end : {100.0, 1000.0, 10000.0}) {
    const auto t = linspace(0, end, 100);
    const std::vector<double> y(t.size(), 7.0);
    const double est = fit_leading_coefficient(t, y, 1, 0.5).estimate;
    EXPECT_LT(est, previous);
    previous = est;
  }
  EXPECT_LT(previous, 1e-3);
}

TEST(Fit, Rejections) {
  const auto t = linspace(1, 10, 15);
  EXPECT_THROW(fit_leading_coefficient(t, t, 1, 0.5), ConfigError);
  EXPECT_THROW(fit_leading_coefficient(t, t, 0, 1.0), ConfigError);
  EXPECT_THROW(fit_leading_coefficient(t, std::vector<double>(3), 1, 1.0), ConfigError);
  EXPECT_THROW(fit_leading_coefficient(t, t, 1, 1.5), ConfigError);
  EXPECT_NO_THROW(fit_leading_coefficient(t, t, 1, 1.0));
}

TEST(Sampling, RealToTimeAndGrids) {
  const auto b = sqrt_basis();
  const auto t = real_to_time(12.5, b);
  EXPECT_EQ(t, sym(b, "a", Rational(25, 2)));
  const auto lin = sample_times(sym(b, "b", 10), SampleGrid{4, false});
  ASSERT_EQ(lin.size(), 4u);
  EXPECT_EQ(lin[0], sym(b, "b", Rational(5, 2)));
  EXPECT_EQ(lin[3], sym(b, "b", 10));
  SampleGrid log_grid{5, true};
  const auto lg = sample_times(sym(b, "a", 160), log_grid);
  EXPECT_EQ(lg.front(), sym(b, "a", 10));
  EXPECT_EQ(lg.back(), sym(b, "a", 160));
  for (std::size_t i = 1; i < lg.size(); ++i) EXPECT_EQ(compare(lg[i - 1], lg[i]), Ordering::Less);
  EXPECT_NEAR(to_real(lg[2]), 40.0, 1e-5);
  EXPECT_TRUE(sample_times(sym(b, "a"), SampleGrid{0}).empty());
  EXPECT_THROW(sample_times(EventTime(b), SampleGrid{3}), ConfigError);
}

TEST(Stabilization, Detection) {
  std::vector<double> t;
  std::vector<double> n;
  for (int i = 1; i <= 100; ++i) {
    t.push_back(i);
    n.push_back(i < 10 ? i : 10);
  }
  const auto s = detect_stabilization(t, n);
  EXPECT_EQ(s.final_count, 10);
  EXPECT_EQ(s.last_change, 10.0);
  EXPECT_TRUE(s.accepted);
  n[80] = 11;
  EXPECT_FALSE(detect_stabilization(t, n).accepted);
}

TEST(InitialCondition, Resolution) {
  const auto g = unit_star();
  auto init = resolve_initial_condition(g, "e1", "1/4", "c", false);
  EXPECT_EQ(init.direction, Direction::Backward);
  EXPECT_EQ(init.offset, EventTime::symbol(g.basis(), 0, Rational(1, 4)));
  init = resolve_initial_condition(g, "e2", "1/3*t0", "l2", true);
  EXPECT_EQ(init.direction, Direction::Forward);
  EXPECT_TRUE(init.emit_both_directions);
  EXPECT_THROW(resolve_initial_condition(g, "nope", "1/2", "c", false), ConfigError);
  EXPECT_THROW(resolve_initial_condition(g, "e1", "1/2", "l2", false), ConfigError);
  const auto b = unit_basis();
  const auto lp = build_graph(loop_pendant_spec(b, sym(b, "t0"), sym(b, "t0", 2)));
  EXPECT_THROW(resolve_initial_condition(lp, "loop", "1/2", "v", false), ConfigError);
  EXPECT_EQ(resolve_initial_condition(lp, "loop", "1/2", "backward", false).direction, Direction::Backward);
}

TEST(RunExperiment, EqualStarIsRank1WithThree) {
  ExperimentConfig config;
  config.graph = star_spec(unit_basis(), std::vector<EventTime>(3, sym(unit_basis(), "t0")));
  config.start_edge = "e1";
  config.direction = "c";
  config.horizon = 100;
  config.grid.count = 100;
  const auto result = run_experiment(config);
  EXPECT_EQ(result.report.regime, Regime::Rank1);
  ASSERT_EQ(result.comparison.rows.size(), 1u);
  EXPECT_EQ(result.comparison.rows[0].measured, 3.0);
  EXPECT_EQ(result.comparison.rows[0].predicted, 3.0);
  ASSERT_TRUE(result.comparison.stabilization);
  EXPECT_TRUE(result.comparison.stabilization->accepted);
  EXPECT_EQ(comparison_to_json(result), comparison_to_json(run_experiment(config)));
}

TEST(RunExperiment, ThetaIndependentProducesFits) {
  const auto b = sqrt_basis();
  ExperimentConfig config;
  config.graph = theta_spec(b, {sym(b, "a"), sym(b, "b"), sym(b, "c")});
  config.start_edge = "e1";
  config.direction = "v2";
  config.horizon = 60;
  config.grid = SampleGrid{60, true};
  const auto result = run_experiment(config);
  EXPECT_EQ(result.series.rows.size(), 60u);
  ASSERT_FALSE(result.comparison.rows.empty());
  EXPECT_EQ(result.comparison.rows[0].quantity, "C");
  EXPECT_LT(result.comparison.rows[0].rel_error, 0.25);
  for (const auto& row : result.series.rows) {
    std::int64_t sum = 0;
    for (const auto c : row.per_edge) sum += c;
    EXPECT_EQ(sum, row.total);
  }
}

TEST(RunExperiment, ConfigErrors) {
  ExperimentConfig config;
  config.graph = star_spec(unit_basis(), std::vector<EventTime>(3, sym(unit_basis(), "t0")));
  config.start_edge = "e1";
  config.direction = "c";
  config.horizon = 0;
  EXPECT_THROW(run_experiment(config), ConfigError);
  config.horizon = 10;
  config.fit_window = 1.0;
  EXPECT_THROW(run_experiment(config), ConfigError);
  config.fit_window = 0.5;
  config.horizon = 0.5;
  EXPECT_THROW(run_experiment(config), ConfigError);
}
