#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "pktgraph/lattice_count.hpp"
#include "support/fixtures.hpp"

using namespace pktgraph;
using namespace pktgraph::testing;

namespace {

Code code_of(std::initializer_list<int> bits) {
  Code c;
  for (const int b : bits) c.parities.push_back(static_cast<std::uint8_t>(b));
  return c;
}

Code code_from_mask(std::size_t mask, std::size_t E) {
  Code c;
  for (std::size_t i = 0; i < E; ++i) c.parities.push_back(static_cast<std::uint8_t>(mask >> i & 1));
  return c;
}

}  // namespace

TEST(SimplexCount, Examples) {
  EXPECT_EQ(simplex_count(std::vector<double>{1, 1}, 2.0), 6u);
  EXPECT_EQ(simplex_count(std::vector<double>{1.3, 2.7, 0.4}, 0.0), 1u);
  EXPECT_EQ(simplex_count(std::vector<double>{1, std::sqrt(2.0)}, 10.0), 45u);
  std::uint64_t floor_sum = 0;
  for (int n1 = 0; n1 <= 10; ++n1) floor_sum += static_cast<std::uint64_t>(std::floor((10 - n1) / std::sqrt(2.0))) + 1;
  EXPECT_EQ(floor_sum, 45u);
}

TEST(SimplexCount, ExactTimesAgreeWithReals) {
  const auto b = sqrt_basis();
  const std::vector<EventTime> times{sym(b, "a"), sym(b, "b")};
  EXPECT_EQ(simplex_count(times, sym(b, "a", 10)), 45u);
  // Boundary points count: 2a + 3b lies exactly on the face.
  const std::vector<EventTime> two{sym(b, "a"), sym(b, "b")};
  const auto face = sym(b, "a", 2) + sym(b, "b", 3);
  EXPECT_EQ(simplex_count(two, face), simplex_count(std::vector<double>{1.0, std::sqrt(2.0)}, to_real(face) + 1e-9));
}

TEST(SimplexCount, CapFailsLoudly) {
  EXPECT_THROW(simplex_count(std::vector<double>{0.01, 0.01, 0.01}, 10.0, 1000), ResourceLimitError);
}

TEST(SimplexCount, MonotoneInT) {
  const std::vector<double> times{1.0, std::sqrt(3.0), 2.2};
  std::uint64_t prev = 0;
  for (double T = 0.0; T < 30.0; T += 0.37) {
    const auto n = simplex_count(times, T);
    EXPECT_GE(n, prev);
    prev = n;
  }
}

TEST(SimplexCount, VolumeAsymptotic) {
  const std::vector<double> times{1.0, std::sqrt(2.0), std::sqrt(3.0)};
  const double prod = std::sqrt(6.0);
  const double T = 200.0;
  const auto n = simplex_count(times, T);
  ASSERT_GT(n, 10'000u);
  const double predicted = T * T * T / (6.0 * prod);
  EXPECT_LT(std::abs(static_cast<double>(n) / predicted - 1.0), 0.10);
}

TEST(CodeCount, Examples) {
  EXPECT_EQ(code_count(code_of({1, 0}), std::vector<double>{1, 1}, 1.0), 1u);
  EXPECT_EQ(code_count(code_of({0, 0}), std::vector<double>{1, std::sqrt(2.0)}, 17.0),
            simplex_count(std::vector<double>{2, 2 * std::sqrt(2.0)}, 17.0));
  EXPECT_EQ(code_count(code_of({1, 1}), std::vector<double>{1, 2}, 2.5), 0u);
}

TEST(CodeCount, PartitionSumsToSimplex) {
  const std::vector<double> times{1.0, std::sqrt(2.0), std::sqrt(3.0)};
  for (const double T : {0.5, 3.0, 11.5, 24.0}) {
    std::uint64_t sum = 0;
    for (std::size_t mask = 0; mask < 8; ++mask) sum += code_count(code_from_mask(mask, 3), times, T);
    EXPECT_EQ(sum, simplex_count(times, T)) << T;
  }
  const auto b = sqrt_basis();
  const std::vector<EventTime> exact{sym(b, "a"), sym(b, "b"), sym(b, "c")};
  std::uint64_t sum = 0;
  for (std::size_t mask = 0; mask < 8; ++mask) sum += code_count(code_from_mask(mask, 3), exact, sym(b, "a", 12));
  EXPECT_EQ(sum, simplex_count(exact, sym(b, "a", 12)));
}

TEST(CodeTimes, NearDuplicatesRejected) {
  EXPECT_THROW(code_times(code_of({0, 0}), std::vector<double>{1.0, 1.0}, 5.0), ConfigError);
  EXPECT_EQ(code_times(code_of({1, 0}), std::vector<double>{1.0, std::sqrt(2.0)}, 1.0).size(), 1u);
}

TEST(ArrivalTimes, StarLeafToCentre) {
  const auto g = unit_star();
  const auto times = arrival_times_brute(g, g.vertex("l1"), g.vertex("c"), 5.0);
  EXPECT_EQ(times, (std::vector<double>{1.0, 3.0, 5.0}));
  EXPECT_TRUE(arrival_times_brute(g, g.vertex("l1"), g.vertex("c"), 0.5).empty());
}

TEST(ArrivalTimes, ThetaSizeMatchesCodeCounts) {
  const auto g = sqrt_theta();
  const auto v1 = g.vertex("v1");
  const auto times = g.travel_times();
  for (const double T : {4.0, 9.5}) {
    std::uint64_t sum = 0;
    for (const auto& c : codes(g, v1, v1)) sum += code_count(c, std::vector<double>{1, std::sqrt(2.0), std::sqrt(3.0)}, T);
    EXPECT_EQ(arrival_times_brute(g, v1, v1, T).size(), sum);
    const auto exact = arrival_times_exact(g, v1, v1, EventTime::symbol(g.basis(), 0, Rational(static_cast<int>(T * 2), 2)));
    EXPECT_EQ(exact.size(), sum);
  }
}

TEST(ArrivalTimes, MisdeclaredIndependenceThrows) {
  const auto b = unit_basis();
  const auto g = build_graph(theta_spec(b, {sym(b, "t0"), sym(b, "t0"), sym(b, "t0", 2)}));
  const auto v1 = g.vertex("v1");
  EXPECT_THROW(arrival_times_exact(g, v1, v1, sym(b, "t0", 6)), ConfigError);
}

TEST(Frobenius, Examples) {
  EXPECT_TRUE(representable(8, 3, 5));
  EXPECT_FALSE(representable(15, 3, 5));
  EXPECT_EQ(frobenius_bound(3, 5), 15);
  EXPECT_EQ(frobenius_bound(2, 3), 6);
  EXPECT_THROW(representable(10, 2, 4), ConfigError);
}

TEST(Frobenius, ExhaustiveAgreement) {
  for (std::int64_t n = 1; n <= 9; ++n) {
    for (std::int64_t m = 1; m <= 9; ++m) {
      if (std::gcd(n, m) != 1) continue;
      const auto bound = frobenius_bound(n, m);
      // Independent brute force over alpha, beta >= 1.
      auto brute = [&](std::int64_t N) {
        for (std::int64_t a = 1; a * n < N; ++a) {
          if ((N - a * n) % m == 0 && (N - a * n) / m >= 1) return true;
        }
        return false;
      };
      EXPECT_FALSE(brute(bound)) << n << "," << m;
      for (std::int64_t N = 1; N <= bound + 3 * n * m + 10; ++N) {
        EXPECT_EQ(representable(N, n, m), brute(N));
        if (N > bound) EXPECT_TRUE(brute(N)) << n << "," << m << " N=" << N;
      }
    }
  }
}
