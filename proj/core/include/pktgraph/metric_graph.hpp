#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pktgraph/time_algebra.hpp"

namespace pktgraph {

using VertexIndex = std::uint32_t;
using EdgeIndex = std::uint32_t;

// Orientation along an edge relative to its declared endpoints: Forward runs
// from endpoint `a` toward endpoint `b`. Self-loops keep both orientations
// distinct.
enum class Direction : std::uint8_t { Forward = 0, Backward = 1 };

inline Direction reversed(Direction d) {
  return d == Direction::Forward ? Direction::Backward : Direction::Forward;
}

struct DirectedEdge {
  EdgeIndex edge = 0;
  Direction dir = Direction::Forward;

  friend bool operator==(const DirectedEdge&, const DirectedEdge&) = default;
  friend auto operator<=>(const DirectedEdge&, const DirectedEdge&) = default;
};

struct EdgeSpec {
  std::string id;
  std::string from;
  std::string to;
  EventTime time;
};

struct GraphSpec {
  TimeBasis basis;
  std::vector<std::string> vertices;
  std::vector<EdgeSpec> edges;
};

struct Edge {
  std::string id;
  VertexIndex a = 0;
  VertexIndex b = 0;
  EventTime travel_time;
  double travel_real = 0.0;

  bool is_loop() const { return a == b; }
};

class MetricGraph {
 public:
  // build_graph: resolves endpoints, checks connectivity and positive travel
  // times. Degree-2 vertices are accepted with a warning.
  static MetricGraph build(const GraphSpec& spec);

  const TimeBasis& basis() const { return basis_; }
  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  const std::string& vertex_name(VertexIndex v) const { return vertices_[v]; }
  const std::vector<std::string>& vertex_names() const { return vertices_; }
  const Edge& edge(EdgeIndex e) const { return edges_[e]; }
  const std::vector<Edge>& edges() const { return edges_; }

  std::optional<VertexIndex> find_vertex(std::string_view name) const;
  std::optional<EdgeIndex> find_edge(std::string_view id) const;
  VertexIndex vertex(std::string_view name) const;  // throws QueryError
  EdgeIndex edge_index(std::string_view id) const;  // throws QueryError

  // Directed edges leaving v, ordered by edge index then orientation. A
  // self-loop contributes both orientations, so size() equals the degree.
  std::span<const DirectedEdge> ports(VertexIndex v) const { return ports_[v]; }
  std::size_t degree(VertexIndex v) const { return ports_[v].size(); }

  VertexIndex tail(DirectedEdge d) const;
  VertexIndex head(DirectedEdge d) const;

  std::vector<EventTime> travel_times() const;
  bool has_degree_two_vertex() const;
  const std::vector<std::string>& warnings() const { return warnings_; }

  // 3 edges meeting at one centre, every other vertex a leaf.
  bool is_three_star() const;

 private:
  TimeBasis basis_;
  std::vector<std::string> vertices_;
  std::vector<Edge> edges_;
  std::vector<std::vector<DirectedEdge>> ports_;
  std::vector<std::string> warnings_;
};

MetricGraph build_graph(const GraphSpec& spec);

// GF(2) chain over edges, one entry (0 or 1) per edge index.
struct Code {
  std::vector<std::uint8_t> parities;

  friend bool operator==(const Code&, const Code&) = default;
  friend auto operator<=>(const Code&, const Code&) = default;
};

struct CycleData {
  std::vector<EdgeIndex> tree_edges;
  std::vector<EdgeIndex> cross_edges;
  std::vector<bool> in_tree;
  // BFS parent edge per vertex; root has none.
  std::vector<std::optional<EdgeIndex>> parent_edge;
  std::vector<VertexIndex> bfs_order;
  std::size_t beta = 0;
  // One per cross edge, in cross_edges order.
  std::vector<Code> fundamental_cycles;
};

// Spanning tree by breadth-first search from the lexicographically smallest
// vertex name, scanning incident edges in index order.
CycleData cycle_rank(const MetricGraph& g);

// GF(2) boundary of a chain: per-vertex parity of incident edge ends.
std::vector<std::uint8_t> boundary(const MetricGraph& g, const Code& chain);

// All 2^beta chains whose boundary is {A} + {B} (zero when A == B), ordered by
// the binary value of their cross-edge assignment.
std::vector<Code> codes(const MetricGraph& g, VertexIndex from, VertexIndex to);

// True iff some nonzero cycle-space vector has even total weight.
bool even_cycle_exists(const MetricGraph& g, std::span<const std::int64_t> weights);

struct PotentialSample {
  double position = 0.0;
  double value = 0.0;
};

// Travel time through a potential at fixed energy, integral of dx/sqrt(E - Q)
// over the sampled interval by composite Simpson on the (possibly non-uniform)
// sample grid.
double travel_time_from_potential(std::span<const PotentialSample> samples, double energy);

}  // namespace pktgraph
