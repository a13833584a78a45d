#pragma once

// Property checks over an event log, shared by the unit suite and the
// acceptance binary. Each returns a list of violations; empty means pass.

#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include "pktgraph/lattice_count.hpp"
#include "pktgraph/packet_dynamics.hpp"

namespace pktgraph::testing {

using Violations = std::vector<std::string>;

namespace detail {

inline std::string key(const EventTime& t, std::size_t tag) { return to_string(t) + "|" + std::to_string(tag); }

inline void note(Violations& v, std::string what) {
  if (v.size() < 20) v.push_back(std::move(what));
}

}  // namespace detail

inline EventTime at_real(const MetricGraph& g, double t) {
  return EventTime::symbol(g.basis(), 0, Rational(static_cast<long long>(std::floor(t * 4096)), 4096));
}

// Off the event set of any log whose times use only integer multiples of
// the basis symbols with small denominators.
inline EventTime generic_time(const MetricGraph& g, double t, int salt) {
  EventTime x = at_real(g, t);
  for (std::size_t s = 1; s < g.basis().rank(); ++s) x += EventTime::symbol(g.basis(), s, Rational(salt, 997));
  return x;
}

// Every vertex batch emits exactly deg(v) records.
inline Violations check_local_conservation(const EventLog& log) {
  const MetricGraph& g = log.graph();
  std::map<std::string, std::size_t> batch;
  std::map<std::string, VertexIndex> vertex_of;
  for (std::size_t i = 0; i < log.size(); ++i) {
    const auto r = log.record(i);
    if (!r.vertex) continue;
    const auto k = detail::key(r.time, *r.vertex);
    ++batch[k];
    vertex_of[k] = *r.vertex;
  }
  Violations v;
  if (batch.empty()) detail::note(v, "no vertex events");
  for (const auto& [k, n] : batch) {
    if (n != g.degree(vertex_of[k])) detail::note(v, "batch " + k + " emitted " + std::to_string(n));
  }
  return v;
}

// No two records share (time, edge, direction), and scattering each batch's
// incoming packets again reproduces exactly the logged departures.
inline Violations check_merge_idempotence(const EventLog& log) {
  const MetricGraph& g = log.graph();
  Violations v;
  std::unordered_set<std::string> seen;
  std::map<std::string, std::vector<DirectedEdge>> incoming;
  std::map<std::string, std::set<DirectedEdge>> outgoing;
  for (std::size_t i = 0; i < log.size(); ++i) {
    const auto r = log.record(i);
    const auto slot = r.edge.edge * 2 + static_cast<std::size_t>(r.edge.dir);
    if (!seen.insert(detail::key(r.time, slot)).second) detail::note(v, "duplicate record " + detail::key(r.time, slot));
    incoming[detail::key(r.time + g.edge(r.edge.edge).travel_time, g.head(r.edge))].push_back(r.edge);
    if (r.vertex) outgoing[detail::key(r.time, *r.vertex)].insert(r.edge);
  }
  for (const auto& [k, out] : outgoing) {
    const auto in = incoming.find(k);
    if (in == incoming.end()) {
      detail::note(v, "batch " + k + " has no incoming packet");
      continue;
    }
    const auto again = scatter(g, g.head(in->second.front()), in->second);
    for (const auto& d : again) {
      if (out.count(d) == 0) detail::note(v, "re-scatter of " + k + " creates a new record");
    }
    if (again.size() != out.size()) detail::note(v, "re-scatter of " + k + " differs in size");
  }
  return v;
}

// Sum of edge counts equals N on `samples` sample instants spread over the
// reliable range; N non-decreasing when `monotone`.
inline Violations check_partition(const EventLog& log, int samples, bool monotone) {
  const MetricGraph& g = log.graph();
  const double reliable = to_real(log.reliable_horizon());
  Violations v;
  std::int64_t previous = 0;
  for (int k = 0; k <= samples; ++k) {
    const auto t = at_real(g, reliable * k / samples);
    std::int64_t sum = 0;
    for (EdgeIndex e = 0; e < g.edge_count(); ++e) sum += log.edge_count(e, t);
    const auto n = log.packet_count(t);
    if (sum != n) detail::note(v, "partition fails at t=" + to_string(t));
    if (monotone && n < previous) detail::note(v, "N decreases at t=" + to_string(t));
    previous = n;
  }
  return v;
}

// Segment counts against differences of one-sided departure counts from
// both endpoints, at generic instants past the initial packet's arrival.
inline Violations check_segment_counts(const EventLog& log) {
  const MetricGraph& g = log.graph();
  const double reliable = to_real(log.reliable_horizon());
  const std::vector<std::pair<Rational, Rational>> windows{
      {0, 1}, {Rational(1, 5), Rational(1, 2)}, {Rational(1, 3), Rational(2, 3)}, {Rational(3, 4), Rational(1, 4)}};
  Violations v;
  for (EdgeIndex e = 0; e < g.edge_count(); ++e) {
    const Edge& edge = g.edge(e);
    if (edge.is_loop()) continue;
    for (const auto& [fq, tq] : windows) {
      const auto f = scale(edge.travel_time, fq);
      const auto tau = scale(edge.travel_time, tq);
      const auto back = edge.travel_time - f - tau;
      for (int k = 1; k <= 12; ++k) {
        const auto t = generic_time(g, reliable * (0.4 + 0.045 * k), k);
        const std::int64_t expected = log.departure_count(edge.a, e, t - f) - log.departure_count(edge.a, e, t - f - tau) +
                                      log.departure_count(edge.b, e, t - back) -
                                      log.departure_count(edge.b, e, t - back - tau);
        const auto got = log.segment_count(e, f, tau, t);
        if (got != expected) {
          detail::note(v, "edge " + edge.id + " t=" + to_string(t) + ": " + std::to_string(got) +
                              " != " + std::to_string(expected));
        }
      }
    }
  }
  return v;
}

// departure_count(a->d, t + 2 delta) >= departure_count(b->d', t) where delta
// is the travel time of a path between a and b (through the BFS root).
inline Violations check_vertex_shift(const EventLog& log) {
  const MetricGraph& g = log.graph();
  const auto cycles = cycle_rank(g);
  std::vector<EventTime> depth(g.vertex_count(), EventTime(g.basis()));
  for (const VertexIndex u : cycles.bfs_order) {
    if (const auto pe = cycles.parent_edge[u]) {
      const Edge& e = g.edge(*pe);
      depth[u] = depth[e.a == u ? e.b : e.a] + e.travel_time;
    }
  }
  const double horizon = to_real(log.horizon());
  Violations v;
  for (VertexIndex a = 0; a < g.vertex_count(); ++a) {
    for (VertexIndex b = 0; b < g.vertex_count(); ++b) {
      const auto delta = depth[a] + depth[b];
      for (const auto& d : g.ports(a)) {
        for (const auto& d2 : g.ports(b)) {
          for (int k = 1; k <= 6; ++k) {
            const auto t = generic_time(g, horizon * k / 8.0, k);
            const auto shifted = t + scale(delta, 2);
            if (to_real(shifted) > horizon) continue;
            if (log.departure_count(a, d.edge, shifted) < log.departure_count(b, d2.edge, t)) {
              detail::note(v, "shift inequality fails for " + g.vertex_name(a) + "->" + g.edge(d.edge).id + " vs " +
                                  g.vertex_name(b) + "->" + g.edge(d2.edge).id);
            }
          }
        }
      }
    }
  }
  return v;
}

inline Violations check_scattering_orthogonality(std::size_t max_degree, double tolerance = 1e-12) {
  Violations v;
  for (std::size_t m = 1; m <= max_degree; ++m) {
    const auto s = scattering_matrix(m);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        double dot = 0.0;
        for (std::size_t k = 0; k < m; ++k) dot += s[i * m + k] * s[j * m + k];
        if (std::abs(dot - (i == j ? 1.0 : 0.0)) > tolerance) {
          detail::note(v, "degree " + std::to_string(m) + " rows " + std::to_string(i) + "," + std::to_string(j));
        }
      }
    }
  }
  return v;
}

// frobenius_bound against brute force over alpha, beta >= 1 for all N up to
// `limit`: the bound is not representable and everything above it is.
inline Violations check_frobenius(std::int64_t n, std::int64_t m, std::int64_t expected, std::int64_t limit) {
  auto brute = [&](std::int64_t N) {
    for (std::int64_t a = 1; a * n < N; ++a) {
      if ((N - a * n) % m == 0) return true;
    }
    return false;
  };
  Violations v;
  const auto bound = frobenius_bound(n, m);
  if (bound != expected) detail::note(v, "frobenius_bound = " + std::to_string(bound));
  if (brute(bound)) detail::note(v, "bound is representable");
  for (std::int64_t N = 1; N <= limit; ++N) {
    if (representable(N, n, m) != brute(N)) detail::note(v, "representable mismatch at " + std::to_string(N));
    if (N > bound && !brute(N)) detail::note(v, std::to_string(N) + " above the bound is not representable");
  }
  return v;
}

inline std::string join(const Violations& v) {
  std::string out;
  for (const auto& s : v) out += s + "\n";
  return out;
}

}  // namespace pktgraph::testing
