#include "pktgraph/lattice_count.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pktgraph {

namespace {

// Visits every n >= 0 with base + sum n_i * step_i <= bound, coordinates in
// nested loops with per-coordinate bound floor((bound - partial) / step_i).
template <class Visit>
void enumerate_simplex(std::span<const double> steps, double base, double bound, std::uint64_t cap,
                       Visit&& visit) {
  for (const double s : steps) {
    if (!(s > 0.0) || !std::isfinite(s)) throw ConfigError("lattice times must be positive and finite");
  }
  if (base > bound) return;
  std::vector<std::int64_t> n(steps.size(), 0);
  std::uint64_t visited = 0;
  auto recurse = [&](auto&& self, std::size_t i, double partial) -> void {
    if (i == steps.size()) {
      if (++visited > cap) throw ResourceLimitError("lattice enumeration exceeded its tuple cap");
      visit(std::span<const std::int64_t>(n), partial);
      return;
    }
    for (n[i] = 0;; ++n[i]) {
      const double next = partial + static_cast<double>(n[i]) * steps[i];
      if (next > bound) break;
      self(self, i + 1, next);
    }
    n[i] = 0;
  };
  recurse(recurse, 0, base);
}

std::vector<double> to_reals(std::span<const EventTime> times) {
  std::vector<double> out;
  out.reserve(times.size());
  for (const auto& t : times) out.push_back(to_real(t));
  return out;
}

double slack_for(double T) { return 1e-7 * std::max(1.0, std::abs(T)); }

// Exact sum_i (c_i + mult * n_i) * t_i in the frame.
void frame_point(const std::vector<std::int64_t>& enc, std::size_t rank, const std::vector<std::int64_t>& offset,
                 std::span<const std::int64_t> n, std::int64_t mult, std::vector<std::int64_t>& out) {
  out = offset;
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (n[i] == 0) continue;
    for (std::size_t k = 0; k < rank; ++k) out[k] += mult * n[i] * enc[i * rank + k];
  }
}

std::uint64_t exact_count(std::span<const EventTime> times, const std::vector<std::int64_t>& parity,
                          std::int64_t mult, const EventTime& T, std::uint64_t cap) {
  if (times.empty()) throw ConfigError("lattice needs at least one time");
  const TimeBasis& basis = times.front().basis();
  std::vector<EventTime> gens(times.begin(), times.end());
  const IntegerFrame frame(basis, gens);
  const std::size_t rank = frame.rank();
  std::vector<std::int64_t> enc(times.size() * rank);
  for (std::size_t i = 0; i < times.size(); ++i) frame.encode(times[i], std::span(enc).subspan(i * rank, rank));
  std::vector<std::int64_t> offset(rank, 0);
  double base = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!parity[i]) continue;
    for (std::size_t k = 0; k < rank; ++k) offset[k] += enc[i * rank + k];
  }
  base = frame.evaluate(offset);
  std::vector<double> steps = to_reals(times);
  for (auto& s : steps) s *= static_cast<double>(mult);
  const double T_real = to_real(T);

  std::uint64_t count = 0;
  std::vector<std::int64_t> point;
  enumerate_simplex(steps, base, T_real + slack_for(T_real), cap, [&](std::span<const std::int64_t> n, double value) {
    if (value < T_real - slack_for(T_real)) {
      ++count;
      return;
    }
    frame_point(enc, rank, offset, n, mult, point);
    if (compare(frame.decode(point), T) != Ordering::Greater) ++count;
  });
  return count;
}

}  // namespace

std::uint64_t simplex_count(std::span<const double> times, double T, std::uint64_t cap) {
  if (times.empty()) throw ConfigError("lattice needs at least one time");
  if (T < 0.0) return 0;
  std::uint64_t count = 0;
  enumerate_simplex(times, 0.0, T, cap, [&](std::span<const std::int64_t>, double) { ++count; });
  return count;
}

std::uint64_t simplex_count(std::span<const EventTime> times, const EventTime& T, std::uint64_t cap) {
  return exact_count(times, std::vector<std::int64_t>(times.size(), 0), 1, T, cap);
}

std::uint64_t code_count(const Code& code, std::span<const double> times, double T, std::uint64_t cap) {
  if (code.parities.size() != times.size()) throw ConfigError("code length must match the number of times");
  double base = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (code.parities[i] > 1) throw ConfigError("code entries must be 0 or 1");
    if (code.parities[i]) base += times[i];
  }
  std::vector<double> steps(times.begin(), times.end());
  for (auto& s : steps) s *= 2.0;
  std::uint64_t count = 0;
  enumerate_simplex(steps, base, T, cap, [&](std::span<const std::int64_t>, double) { ++count; });
  return count;
}

std::uint64_t code_count(const Code& code, std::span<const EventTime> times, const EventTime& T,
                         std::uint64_t cap) {
  if (code.parities.size() != times.size()) throw ConfigError("code length must match the number of times");
  std::vector<std::int64_t> parity;
  for (const auto c : code.parities) {
    if (c > 1) throw ConfigError("code entries must be 0 or 1");
    parity.push_back(c);
  }
  return exact_count(times, parity, 2, T, cap);
}

std::vector<double> code_times(const Code& code, std::span<const double> times, double T, std::uint64_t cap) {
  if (code.parities.size() != times.size()) throw ConfigError("code length must match the number of times");
  double base = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (code.parities[i]) base += times[i];
  }
  std::vector<double> steps(times.begin(), times.end());
  for (auto& s : steps) s *= 2.0;
  std::vector<double> out;
  enumerate_simplex(steps, base, T, cap, [&](std::span<const std::int64_t>, double v) { out.push_back(v); });
  std::sort(out.begin(), out.end());
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (out[i] - out[i - 1] <= kRealDuplicateTolerance) {
      throw ConfigError("two lattice tuples give near-identical instants at " + std::to_string(out[i]));
    }
  }
  return out;
}

namespace {

struct CodeInstant {
  std::vector<std::int64_t> coeffs;
  double real;
  std::size_t code;
};

// Exact instants for every code of g between the endpoints, accepted when
// `within` says so for their exact value.
template <class Within>
std::vector<CodeInstant> collect_instants(const MetricGraph& g, VertexIndex from, VertexIndex to, double bound,
                                          std::uint64_t cap, IntegerFrame& frame, Within&& within) {
  const std::vector<EventTime> times = g.travel_times();
  frame = IntegerFrame(g.basis(), times);
  const std::size_t rank = frame.rank();
  std::vector<std::int64_t> enc(times.size() * rank);
  for (std::size_t i = 0; i < times.size(); ++i) frame.encode(times[i], std::span(enc).subspan(i * rank, rank));
  std::vector<double> steps = to_reals(times);
  for (auto& s : steps) s *= 2.0;

  const std::vector<Code> all = codes(g, from, to);
  std::vector<CodeInstant> out;
  std::uint64_t remaining = cap;
  for (std::size_t c = 0; c < all.size(); ++c) {
    std::vector<std::int64_t> offset(rank, 0);
    for (std::size_t i = 0; i < times.size(); ++i) {
      if (!all[c].parities[i]) continue;
      for (std::size_t k = 0; k < rank; ++k) offset[k] += enc[i * rank + k];
    }
    std::uint64_t used = 0;
    std::vector<std::int64_t> point;
    enumerate_simplex(steps, frame.evaluate(offset), bound, remaining, [&](std::span<const std::int64_t> n, double) {
      ++used;
      frame_point(enc, rank, offset, n, 2, point);
      if (within(point)) out.push_back({point, frame.evaluate(point), c});
    });
    remaining -= std::min(remaining, used);
  }

  std::sort(out.begin(), out.end(), [](const CodeInstant& x, const CodeInstant& y) {
    if (x.coeffs != y.coeffs) return x.coeffs < y.coeffs;
    return x.code < y.code;
  });
  std::vector<CodeInstant> unique;
  for (auto& inst : out) {
    if (!unique.empty() && unique.back().coeffs == inst.coeffs) {
      if (unique.back().code != inst.code) {
        throw ConfigError("distinct codes share the instant " + to_string(frame.decode(inst.coeffs)) +
                          "; travel times are not independent over Q");
      }
      continue;
    }
    unique.push_back(std::move(inst));
  }
  std::sort(unique.begin(), unique.end(), [](const CodeInstant& x, const CodeInstant& y) { return x.real < y.real; });
  for (std::size_t i = 1; i < unique.size(); ++i) {
    compare(frame.decode(unique[i - 1].coeffs), frame.decode(unique[i].coeffs));  // throws if ambiguous
  }
  return unique;
}

}  // namespace

std::vector<EventTime> arrival_times_exact(const MetricGraph& g, VertexIndex from, VertexIndex to,
                                           const EventTime& T, std::uint64_t cap) {
  IntegerFrame frame;
  const double T_real = to_real(T);
  const double slack = slack_for(T_real);
  const IntegerFrame* fp = &frame;
  auto inst = collect_instants(g, from, to, T_real + slack, cap, frame, [&](const std::vector<std::int64_t>& p) {
    const double v = fp->evaluate(p);
    if (v < T_real - slack) return true;
    return compare(fp->decode(p), T) != Ordering::Greater;
  });
  std::vector<EventTime> out;
  out.reserve(inst.size());
  for (const auto& i : inst) out.push_back(frame.decode(i.coeffs));
  return out;
}

std::vector<double> arrival_times_brute(const MetricGraph& g, VertexIndex from, VertexIndex to, double T,
                                        std::uint64_t cap) {
  IntegerFrame frame;
  const IntegerFrame* fp = &frame;
  auto inst = collect_instants(g, from, to, T, cap, frame,
                               [&](const std::vector<std::int64_t>& p) { return fp->evaluate(p) <= T; });
  std::vector<double> out;
  out.reserve(inst.size());
  for (const auto& i : inst) out.push_back(i.real);
  return out;
}

bool representable(std::int64_t N, std::int64_t n, std::int64_t m) {
  if (n < 1 || m < 1) throw ConfigError("representability needs n, m >= 1");
  if (std::gcd(n, m) != 1) throw ConfigError("representability needs gcd(n, m) = 1");
  for (std::int64_t alpha = 1; alpha * n + m <= N; ++alpha) {
    if ((N - alpha * n) % m == 0) return true;
  }
  return false;
}

std::int64_t frobenius_bound(std::int64_t n, std::int64_t m) {
  if (n < 1 || m < 1) throw ConfigError("frobenius bound needs n, m >= 1");
  if (std::gcd(n, m) != 1) throw ConfigError("frobenius bound needs gcd(n, m) = 1");
  // beta * m = i + n * k_i for beta = 1..n covers every residue i mod n, so
  // every N > n * max k_i is representable.
  std::int64_t k0 = 0;
  for (std::int64_t beta = 1; beta <= n; ++beta) k0 = std::max(k0, beta * m / n);
  const std::int64_t limit = n * k0 + n * m;
  std::int64_t largest_gap = 0;
  for (std::int64_t N = 1; N <= limit; ++N) {
    if (!representable(N, n, m)) largest_gap = N;
  }
  return largest_gap;
}

}  // namespace pktgraph
