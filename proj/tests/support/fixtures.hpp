#pragma once

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "pktgraph/metric_graph.hpp"
#include "pktgraph/time_algebra.hpp"

namespace pktgraph::testing {

inline TimeBasis unit_basis() { return make_basis({{"t0", 1.0}}); }

// Symbols a, b, c with witnesses 1, sqrt 2, sqrt 3.
inline TimeBasis sqrt_basis() {
  return make_basis({{"a", 1.0}, {"b", std::sqrt(2.0)}, {"c", std::sqrt(3.0)}});
}

inline EventTime sym(const TimeBasis& basis, const std::string& name, const Rational& q = 1) {
  return EventTime::symbol(basis, *basis.find(name), q);
}

// Centre "c", leaves "l1".."lk", edge "e<i>" from c to l<i>.
inline GraphSpec star_spec(const TimeBasis& basis, const std::vector<EventTime>& times) {
  GraphSpec spec{basis, {"c"}, {}};
  for (std::size_t i = 0; i < times.size(); ++i) {
    const std::string leaf = "l" + std::to_string(i + 1);
    spec.vertices.push_back(leaf);
    spec.edges.push_back({"e" + std::to_string(i + 1), "c", leaf, times[i]});
  }
  return spec;
}

// Two vertices v1, v2 joined by parallel edges e1..ek.
inline GraphSpec theta_spec(const TimeBasis& basis, const std::vector<EventTime>& times) {
  GraphSpec spec{basis, {"v1", "v2"}, {}};
  for (std::size_t i = 0; i < times.size(); ++i) {
    spec.edges.push_back({"e" + std::to_string(i + 1), "v1", "v2", times[i]});
  }
  return spec;
}

// Vertex "v" with a self-loop "loop" and a pendant edge "tail" to leaf "u".
inline GraphSpec loop_pendant_spec(const TimeBasis& basis, const EventTime& loop, const EventTime& tail) {
  return GraphSpec{basis, {"v", "u"}, {{"loop", "v", "v", loop}, {"tail", "v", "u", tail}}};
}

inline MetricGraph unit_star(int leaves = 3) {
  const TimeBasis b = unit_basis();
  return build_graph(star_spec(b, std::vector<EventTime>(static_cast<std::size_t>(leaves), sym(b, "t0"))));
}

inline MetricGraph sqrt_theta() {
  const TimeBasis b = sqrt_basis();
  return build_graph(theta_spec(b, {sym(b, "a"), sym(b, "b"), sym(b, "c")}));
}

inline MetricGraph sqrt_star() {
  const TimeBasis b = sqrt_basis();
  return build_graph(star_spec(b, {sym(b, "a"), sym(b, "b"), sym(b, "c")}));
}

inline EventTime at(const TimeBasis& basis, const std::string& expr) { return parse_event_time(expr, basis); }

// Connected multigraph on vertices v0..v<V-1>: a random spanning tree, then
// extra edges (self-loops allowed) up to E. Edge i gets times[i].
template <class Rng>
GraphSpec random_spec(Rng& rng, std::size_t V, const TimeBasis& basis, const std::vector<EventTime>& times) {
  GraphSpec spec{basis, {}, {}};
  for (std::size_t v = 0; v < V; ++v) spec.vertices.push_back("v" + std::to_string(v));
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  for (std::size_t i = 0; i < times.size(); ++i) {
    std::size_t a = 0;
    std::size_t b = 0;
    if (i + 1 < V) {
      a = i + 1;
      b = pick(i + 1);
    } else {
      a = pick(V);
      b = pick(V);
    }
    spec.edges.push_back({"e" + std::to_string(i), spec.vertices[a], spec.vertices[b], times[i]});
  }
  return spec;
}

}  // namespace pktgraph::testing
