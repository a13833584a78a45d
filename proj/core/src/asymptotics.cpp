#include "pktgraph/asymptotics.hpp"

#include <cmath>
#include <numeric>

namespace pktgraph {

namespace {

struct TimeSums {
  double sum = 0.0;
  double prod = 1.0;
};

TimeSums sums_of(const MetricGraph& g) {
  TimeSums s;
  for (const auto& e : g.edges()) {
    s.sum += e.travel_real;
    s.prod *= e.travel_real;
  }
  return s;
}

void require_no_degree_two(const MetricGraph& g) {
  if (g.has_degree_two_vertex()) throw RegimeError("graph has a degree-2 vertex; the counting theorems exclude it");
}

void require_independent(const MetricGraph& g) {
  require_no_degree_two(g);
  const auto times = g.travel_times();
  if (rational_rank(times) != times.size()) {
    throw RegimeError("travel times are not independent over Q");
  }
}

BigInt gcd_of(std::span<const std::int64_t> values) {
  std::int64_t g = 0;
  for (const auto v : values) g = std::gcd(g, v);
  return g;
}

}  // namespace

std::string to_string(Regime r) {
  switch (r) {
    case Regime::Independent: return "independent";
    case Regime::Rank1: return "rank1";
    case Regime::StarRank2: return "star_rank2";
    case Regime::Unsupported: return "unsupported";
  }
  return "unsupported";
}

Regime parse_regime(const std::string& text) {
  if (text == "independent") return Regime::Independent;
  if (text == "rank1") return Regime::Rank1;
  if (text == "star_rank2") return Regime::StarRank2;
  if (text == "unsupported") return Regime::Unsupported;
  throw ConfigError("unknown regime '" + text + "'");
}

std::uint64_t factorial(std::size_t n) {
  if (n > kMaxFactorialEdges) throw RegimeError("factorials are limited to 20 edges");
  std::uint64_t f = 1;
  for (std::size_t k = 2; k <= n; ++k) f *= k;
  return f;
}

double leading_coefficient(const MetricGraph& g) {
  require_independent(g);
  const TimeSums s = sums_of(g);
  const auto V = static_cast<int>(g.vertex_count());
  const double denom = std::ldexp(static_cast<double>(factorial(g.edge_count() - 1)), V - 2);
  return s.sum / s.prod / denom;
}

double radiation_coefficient(const MetricGraph& g) {
  require_independent(g);
  const TimeSums s = sums_of(g);
  const auto V = static_cast<int>(g.vertex_count());
  const double r = 1.0 / (std::ldexp(static_cast<double>(factorial(g.edge_count())), V - 1) * s.prod);
  const double via_codes = arrival_leading(g);
  if (std::abs(r - via_codes) > 1e-12 * r) {
    throw std::logic_error("radiation coefficient forms disagree; Euler relation violated");
  }
  return r;
}

double arrival_leading(const MetricGraph& g) {
  require_independent(g);
  const TimeSums s = sums_of(g);
  const auto beta = static_cast<int>(cycle_rank(g).beta);
  const auto E = static_cast<int>(g.edge_count());
  return std::ldexp(1.0, beta - E) / (static_cast<double>(factorial(g.edge_count())) * s.prod);
}

Relation check_relation(const MetricGraph& g, std::optional<double> R_override) {
  Relation rel;
  rel.C = leading_coefficient(g);
  rel.R = R_override ? *R_override : radiation_coefficient(g);
  const double sum = sums_of(g).sum;
  rel.residual = std::abs(rel.C - 2.0 * static_cast<double>(g.edge_count()) * rel.R * sum) / rel.C;
  return rel;
}

double uniform_density(std::span<const double> times) {
  double sum = 0.0;
  for (const double t : times) {
    if (!(t > 0.0)) throw ConfigError("travel times must be positive");
    sum += t;
  }
  if (times.empty()) throw ConfigError("uniform density needs at least one time");
  return 1.0 / sum;
}

double uniform_density(std::span<const EventTime> times) {
  std::vector<double> reals;
  for (const auto& t : times) reals.push_back(to_real(t));
  return uniform_density(reals);
}

CommensurableTimes commensurable_decomposition(std::span<const EventTime> times) {
  if (times.empty()) throw ConfigError("no times to decompose");
  if (rational_rank(times) != 1) throw RegimeError("times do not have rational rank one");
  const EventTime& ref = times.front();
  const std::size_t pivot = ref.terms().front().symbol;
  const Rational ref_coeff = ref.terms().front().coeff;

  std::vector<Rational> ratios;
  BigInt lcm_den = 1;
  for (const auto& t : times) {
    const Rational q = t.coefficient(pivot) / ref_coeff;
    if (!(scale(ref, q) == t)) throw RegimeError("times do not share a common rational direction");
    lcm_den = boost::multiprecision::lcm(lcm_den, boost::multiprecision::denominator(q));
    ratios.push_back(q);
  }
  std::vector<std::int64_t> k;
  for (const auto& q : ratios) {
    const Rational scaled = q * lcm_den;
    k.push_back(static_cast<std::int64_t>(boost::multiprecision::numerator(scaled)));
  }
  const BigInt g = gcd_of(k);
  CommensurableTimes out;
  for (auto v : k) out.multiples.push_back(v / static_cast<std::int64_t>(g));
  out.t0 = scale(ref, Rational(g, lcm_den));
  if (out.multiples.front() < 0) {
    for (auto& v : out.multiples) v = -v;
    out.t0 = -out.t0;
  }
  return out;
}

std::int64_t rank1_limit(const MetricGraph& g, std::span<const std::int64_t> multiples) {
  require_no_degree_two(g);
  if (multiples.size() != g.edge_count()) throw ConfigError("one multiple per edge required");
  for (const auto n : multiples) {
    if (n < 1) throw ConfigError("edge multiples must be positive integers");
  }
  if (gcd_of(multiples) != 1) throw RegimeError("edge multiples must have gcd 1");
  const std::int64_t total = std::accumulate(multiples.begin(), multiples.end(), std::int64_t{0});
  return even_cycle_exists(g, multiples) ? 2 * total : total;
}

double rank2_star_slope(std::int64_t n, std::int64_t m, double t0, double t3) {
  if (n < 1 || m < 1) throw ConfigError("n and m must be positive");
  if (std::gcd(n, m) != 1) throw RegimeError("n and m must be coprime");
  if (!(t0 > 0.0) || !(t3 > 0.0)) throw ConfigError("t0 and t3 must be positive");
  return 0.5 * (static_cast<double>(m + n) / t3 + 1.0 / t0);
}

StarRank2Parameters star_rank2_parameters(const MetricGraph& g) {
  if (!g.is_three_star()) throw RegimeError("rank-2 slope applies to three-edge stars only");
  const auto times = g.travel_times();
  if (rational_rank(times) != 2) throw RegimeError("star travel times do not have rational rank two");
  for (EdgeIndex i = 0; i < 3; ++i) {
    for (EdgeIndex j = i + 1; j < 3; ++j) {
      const std::vector<EventTime> pair{times[i], times[j]};
      if (rational_rank(pair) != 1) continue;
      const CommensurableTimes c = commensurable_decomposition(pair);
      StarRank2Parameters p;
      p.n = c.multiples[0];
      p.m = c.multiples[1];
      p.t0 = c.t0;
      p.edge_n = i;
      p.edge_m = j;
      p.edge_free = 3 - i - j;
      p.t3 = times[p.edge_free];
      return p;
    }
  }
  throw RegimeError("no two star edges are rationally related");
}

Regime classify_regime(std::span<const EventTime> times, const MetricGraph* g) {
  if (times.empty()) return Regime::Unsupported;
  const std::size_t rank = rational_rank(times);
  if (rank == times.size()) return Regime::Independent;
  if (rank == 1) return Regime::Rank1;
  if (rank == 2 && g != nullptr && g->is_three_star()) {
    for (std::size_t i = 0; i < times.size(); ++i) {
      for (std::size_t j = i + 1; j < times.size(); ++j) {
        const std::vector<EventTime> pair{times[i], times[j]};
        if (rational_rank(pair) == 1) return Regime::StarRank2;
      }
    }
  }
  return Regime::Unsupported;
}

Regime classify_regime(const MetricGraph& g) {
  if (g.has_degree_two_vertex()) return Regime::Unsupported;
  const auto times = g.travel_times();
  return classify_regime(times, &g);
}

PredictionReport predict(const MetricGraph& g) {
  PredictionReport r;
  r.regime = classify_regime(g);
  r.vertices = g.vertex_count();
  r.edges = g.edge_count();
  r.beta = cycle_rank(g).beta;
  const TimeSums s = sums_of(g);
  r.sum_times = s.sum;
  r.prod_times = s.prod;
  r.uniform_density = 1.0 / s.sum;
  for (const auto& e : g.edges()) {
    r.edge_ids.push_back(e.id);
    r.edge_times.push_back(e.travel_real);
  }
  switch (r.regime) {
    case Regime::Independent:
      r.C = leading_coefficient(g);
      r.R = radiation_coefficient(g);
      r.arrival_leading = arrival_leading(g);
      break;
    case Regime::Rank1: {
      const auto times = g.travel_times();
      const CommensurableTimes c = commensurable_decomposition(times);
      r.rank1_limit = rank1_limit(g, c.multiples);
      break;
    }
    case Regime::StarRank2: {
      const StarRank2Parameters p = star_rank2_parameters(g);
      r.rank2_slope = rank2_star_slope(p.n, p.m, to_real(p.t0), to_real(p.t3));
      break;
    }
    case Regime::Unsupported:
      break;
  }
  return r;
}

}  // namespace pktgraph
