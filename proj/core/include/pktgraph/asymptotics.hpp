#pragma once

// Closed-form predictors for packet counts.
//
// Independent travel times (rank E over Q):
//   N(t)            ~ C t^(E-1),  C = (sum t) / (2^(V-2) (E-1)! prod t)
//   N_{a->e}(t)     ~ R t^E,      R = 1 / (2^(V-1) E! prod t)
//   arrivals at B   ~ 2^beta T^E / (2^E E! prod t)
//   N_e(t) / N(t)   -> t_e / sum t
// and C = 2 E R sum t.
//
// Rank one, t_i = n_i t0 with gcd(n) = 1: N settles at 2 sum n_i when some
// cycle has even weight, sum n_i otherwise.
//
// Three-star with t1 = n t0, t2 = m t0 and t3 independent:
//   N(T) ~ (T / 2) ((m + n) / t3 + 1 / t0).

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pktgraph/metric_graph.hpp"
#include "pktgraph/time_algebra.hpp"

namespace pktgraph {

enum class Regime { Independent, Rank1, StarRank2, Unsupported };

std::string to_string(Regime r);
Regime parse_regime(const std::string& text);

inline constexpr std::size_t kMaxFactorialEdges = 20;

// Exact n! for n <= kMaxFactorialEdges; RegimeError beyond.
std::uint64_t factorial(std::size_t n);

double leading_coefficient(const MetricGraph& g);
double radiation_coefficient(const MetricGraph& g);
// 2^beta / (2^E E! prod t).
double arrival_leading(const MetricGraph& g);

struct Relation {
  double C = 0.0;
  double R = 0.0;
  double residual = 0.0;
};

// residual = |C - 2 E R sum t| / C. `R_override` lets tests inject a fault.
Relation check_relation(const MetricGraph& g, std::optional<double> R_override = std::nullopt);

double uniform_density(std::span<const double> times);
double uniform_density(std::span<const EventTime> times);

// Integer multiples n_i of a common t0 for a rank-one family, with gcd 1.
struct CommensurableTimes {
  EventTime t0;
  std::vector<std::int64_t> multiples;
};
CommensurableTimes commensurable_decomposition(std::span<const EventTime> times);

std::int64_t rank1_limit(const MetricGraph& g, std::span<const std::int64_t> multiples);

double rank2_star_slope(std::int64_t n, std::int64_t m, double t0, double t3);

struct StarRank2Parameters {
  std::int64_t n = 0;
  std::int64_t m = 0;
  EventTime t0;
  EventTime t3;
  // Edge indices carrying n t0, m t0 and t3.
  EdgeIndex edge_n = 0;
  EdgeIndex edge_m = 0;
  EdgeIndex edge_free = 0;
};
StarRank2Parameters star_rank2_parameters(const MetricGraph& g);

// `g` is optional; without it StarRank2 is never reported.
Regime classify_regime(std::span<const EventTime> times, const MetricGraph* g = nullptr);
Regime classify_regime(const MetricGraph& g);

struct PredictionReport {
  Regime regime = Regime::Unsupported;
  std::size_t vertices = 0;
  std::size_t edges = 0;
  std::size_t beta = 0;
  double sum_times = 0.0;
  double prod_times = 0.0;
  double uniform_density = 0.0;
  std::optional<double> C;
  std::optional<double> R;
  std::optional<double> arrival_leading;
  std::optional<std::int64_t> rank1_limit;
  std::optional<double> rank2_slope;
  std::vector<std::string> edge_ids;
  std::vector<double> edge_times;
};

// Evaluates every predictor that applies to the graph's regime.
PredictionReport predict(const MetricGraph& g);

}  // namespace pktgraph
