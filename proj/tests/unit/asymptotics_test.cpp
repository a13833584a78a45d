#include <gtest/gtest.h>

#include <cmath>

#include "pktgraph/asymptotics.hpp"
#include "support/fixtures.hpp"

using namespace pktgraph;
using namespace pktgraph::testing;

namespace {

MetricGraph scaled(const GraphSpec& spec, const Rational& lambda) {
  GraphSpec s = spec;
  for (auto& e : s.edges) e.time = scale(e.time, lambda);
  return build_graph(s);
}

}  // namespace

TEST(Predictors, ThetaAndStarValues) {
  const auto theta = sqrt_theta();
  const auto star = sqrt_star();
  EXPECT_NEAR(leading_coefficient(theta), 0.8463526704200182, 1e-13);
  EXPECT_NEAR(leading_coefficient(star), 0.21158816760500454, 1e-13);
  EXPECT_NEAR(radiation_coefficient(star), 0.008505172717997146, 1e-15);
  EXPECT_NEAR(radiation_coefficient(theta), 0.034020690871988585, 1e-15);
  EXPECT_NEAR(arrival_leading(theta), 4.0 / (8.0 * 6.0 * 2.4494897427831783), 1e-15);
  for (const auto* g : {&theta, &star}) {
    const double lemma = std::pow(2.0, static_cast<double>(cycle_rank(*g).beta)) /
                         (std::pow(2.0, 3.0) * 6.0 * 2.4494897427831783);
    EXPECT_NEAR(arrival_leading(*g) / lemma, 1.0, 1e-13);
    EXPECT_NEAR(radiation_coefficient(*g) / lemma, 1.0, 1e-13);
  }
}

TEST(Predictors, Homogeneity) {
  const auto b = sqrt_basis();
  const auto spec = star_spec(b, {sym(b, "a"), sym(b, "b"), sym(b, "c")});
  const auto g1 = build_graph(spec);
  const auto g2 = scaled(spec, 2);
  EXPECT_NEAR(leading_coefficient(g2), leading_coefficient(g1) / 4.0, 1e-15);
  EXPECT_NEAR(radiation_coefficient(g2), radiation_coefficient(g1) / 8.0, 1e-15);
}

TEST(Predictors, RegimeErrors) {
  const auto b = unit_basis();
  const auto rank1 = build_graph(theta_spec(b, {sym(b, "t0"), sym(b, "t0"), sym(b, "t0", 2)}));
  EXPECT_THROW(leading_coefficient(rank1), RegimeError);
  const auto sb = sqrt_basis();
  const auto path = build_graph(GraphSpec{sb, {"x", "m", "y"}, {{"e1", "x", "m", sym(sb, "a")}, {"e2", "m", "y", sym(sb, "b")}}});
  EXPECT_THROW(radiation_coefficient(path), RegimeError);
  EXPECT_EQ(classify_regime(path), Regime::Unsupported);
}

TEST(Relation, IdentityAndFaultDetector) {
  for (const auto& g : {sqrt_theta(), sqrt_star()}) {
    const auto r = check_relation(g);
    EXPECT_LE(r.residual, 1e-12);
    const auto bad = check_relation(g, r.R * 1.01);
    EXPECT_NEAR(bad.residual, 0.01, 1e-9);
  }
}

TEST(Relation, HoldsOnRandomIndependentGraphs) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> witness(0.3, 4.0);
  int checked = 0;
  while (checked < 100) {
    const std::size_t V = 1 + rng() % 5;
    const std::size_t E = std::max<std::size_t>(1, V - 1 + rng() % 4);
    std::vector<BasisSymbol> symbols;
    for (std::size_t i = 0; i < E; ++i) symbols.push_back({"s" + std::to_string(i), witness(rng)});
    const auto b = make_basis(symbols);
    std::vector<EventTime> times;
    for (std::size_t i = 0; i < E; ++i) times.push_back(EventTime::symbol(b, i));
    const auto g = build_graph(random_spec(rng, V, b, times));
    if (g.has_degree_two_vertex()) continue;
    const auto r = check_relation(g);
    EXPECT_LE(r.residual, 1e-12);
    EXPECT_NEAR(arrival_leading(g) / radiation_coefficient(g), 1.0, 1e-12);
    ++checked;
  }
}

TEST(UniformDensity, Examples) {
  EXPECT_NEAR(uniform_density(std::vector<double>{1, std::sqrt(2.0), std::sqrt(3.0)}), 0.24118095489747923, 1e-15);
  EXPECT_NEAR(uniform_density(std::vector<double>{2, 2, 2, 2}), 1.0 / 8.0, 1e-15);
  EXPECT_EQ(uniform_density(std::vector<double>{1}), 1.0);
  EXPECT_NEAR(uniform_density(sqrt_theta().travel_times()), 0.24118095489747923, 1e-15);
}

TEST(Rank1, Limits) {
  const auto b = unit_basis();
  EXPECT_EQ(rank1_limit(unit_star(), std::vector<std::int64_t>{1, 1, 1}), 3);
  const auto theta = build_graph(theta_spec(b, {sym(b, "t0"), sym(b, "t0"), sym(b, "t0", 2)}));
  EXPECT_EQ(rank1_limit(theta, std::vector<std::int64_t>{1, 1, 2}), 8);
  const auto lp = build_graph(loop_pendant_spec(b, sym(b, "t0"), sym(b, "t0", 2)));
  EXPECT_EQ(rank1_limit(lp, std::vector<std::int64_t>{1, 2}), 3);
  EXPECT_THROW(rank1_limit(theta, std::vector<std::int64_t>{2, 2, 4}), RegimeError);
}

TEST(Rank1, CommensurableDecomposition) {
  const auto b = unit_basis();
  const std::vector<EventTime> times{sym(b, "t0", Rational(1, 2)), sym(b, "t0", Rational(3, 4)), sym(b, "t0", 2)};
  const auto d = commensurable_decomposition(times);
  EXPECT_EQ(d.multiples, (std::vector<std::int64_t>{2, 3, 8}));
  EXPECT_EQ(d.t0, sym(b, "t0", Rational(1, 4)));
}

TEST(Rank2, Slope) {
  EXPECT_NEAR(rank2_star_slope(1, 2, 1.0, std::sqrt(2.0)), 1.5606601717798212, 1e-13);
  EXPECT_NEAR(rank2_star_slope(1, 1, 1.0, 2.0), 0.5 * (2.0 / 2.0 + 1.0), 1e-15);
  EXPECT_NEAR(rank2_star_slope(1, 2, 1.0, 1e12), 0.5, 1e-9);
  const auto b = sqrt_basis();
  const auto g = build_graph(star_spec(b, {sym(b, "a"), sym(b, "a", 2), sym(b, "b")}));
  const auto p = star_rank2_parameters(g);
  EXPECT_EQ(p.n, 1);
  EXPECT_EQ(p.m, 2);
  EXPECT_EQ(p.edge_free, 2u);
}

TEST(Classify, Examples) {
  const auto b = sqrt_basis();
  EXPECT_EQ(classify_regime(sqrt_theta()), Regime::Independent);
  const std::vector<EventTime> r1{sym(b, "a"), sym(b, "a", 2), sym(b, "a", 3)};
  EXPECT_EQ(classify_regime(r1), Regime::Rank1);
  const auto star2 = build_graph(star_spec(b, {sym(b, "a"), sym(b, "a", 2), sym(b, "b")}));
  EXPECT_EQ(classify_regime(star2), Regime::StarRank2);
  const auto theta2 = build_graph(theta_spec(b, {sym(b, "a"), sym(b, "a", 2), sym(b, "b")}));
  EXPECT_EQ(classify_regime(theta2), Regime::Unsupported);
  EXPECT_EQ(parse_regime(to_string(Regime::StarRank2)), Regime::StarRank2);
  EXPECT_THROW(parse_regime("bogus"), ConfigError);
}

TEST(Predict, ReportFields) {
  const auto r = predict(sqrt_theta());
  EXPECT_EQ(r.regime, Regime::Independent);
  EXPECT_EQ(r.beta, 2u);
  ASSERT_TRUE(r.C && r.R && r.arrival_leading);
  EXPECT_FALSE(r.rank1_limit.has_value());
  EXPECT_NEAR(r.sum_times, 4.146264369941973, 1e-14);
  EXPECT_NEAR(r.prod_times, 2.4494897427831783, 1e-14);
  const auto star = predict(unit_star());
  EXPECT_EQ(star.regime, Regime::Rank1);
  EXPECT_EQ(star.rank1_limit, std::optional<std::int64_t>(3));
  EXPECT_FALSE(star.C.has_value());
}

TEST(Factorial, Limits) {
  EXPECT_EQ(factorial(0), 1u);
  EXPECT_EQ(factorial(20), 2432902008176640000u);
  EXPECT_THROW(factorial(21), RegimeError);
}
