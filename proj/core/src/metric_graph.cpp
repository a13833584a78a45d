#include "pktgraph/metric_graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numeric>

namespace pktgraph {

MetricGraph MetricGraph::build(const GraphSpec& spec) {
  MetricGraph g;
  g.basis_ = spec.basis;
  if (spec.vertices.empty()) throw ConfigError("graph has no vertices");

  std::map<std::string, VertexIndex, std::less<>> by_name;
  for (const auto& name : spec.vertices) {
    if (name.empty()) throw ConfigError("empty vertex name");
    if (!by_name.emplace(name, static_cast<VertexIndex>(g.vertices_.size())).second) {
      throw ConfigError("duplicate vertex '" + name + "'");
    }
    g.vertices_.push_back(name);
  }
  g.ports_.resize(g.vertices_.size());

  std::map<std::string, EdgeIndex, std::less<>> edge_ids;
  for (const auto& es : spec.edges) {
    const auto from = by_name.find(es.from);
    const auto to = by_name.find(es.to);
    if (from == by_name.end()) throw ConfigError("edge '" + es.id + "' has unknown endpoint '" + es.from + "'");
    if (to == by_name.end()) throw ConfigError("edge '" + es.id + "' has unknown endpoint '" + es.to + "'");
    if (es.id.empty()) throw ConfigError("empty edge id");
    const auto index = static_cast<EdgeIndex>(g.edges_.size());
    if (!edge_ids.emplace(es.id, index).second) throw ConfigError("duplicate edge id '" + es.id + "'");
    if (!(es.time.basis() == spec.basis) && es.time.basis().rank() != 0) {
      throw ConfigError("edge '" + es.id + "' travel time uses a different basis");
    }
    Edge e{es.id, from->second, to->second, es.time, to_real(es.time)};
    if (!(e.travel_real > 0.0)) {
      throw ConfigError("edge '" + es.id + "' has non-positive travel time " + to_string(es.time));
    }
    g.edges_.push_back(std::move(e));
    g.ports_[from->second].push_back({index, Direction::Forward});
    g.ports_[to->second].push_back({index, Direction::Backward});
  }
  for (auto& p : g.ports_) std::sort(p.begin(), p.end());

  // Connectivity.
  std::vector<bool> seen(g.vertices_.size(), false);
  std::deque<VertexIndex> queue{0};
  seen[0] = true;
  std::size_t reached = 1;
  while (!queue.empty()) {
    const VertexIndex v = queue.front();
    queue.pop_front();
    for (const auto& port : g.ports_[v]) {
      const VertexIndex w = g.head(port);
      if (!seen[w]) {
        seen[w] = true;
        ++reached;
        queue.push_back(w);
      }
    }
  }
  if (reached != g.vertices_.size()) throw ConfigError("graph is disconnected");

  for (VertexIndex v = 0; v < g.vertices_.size(); ++v) {
    if (g.degree(v) == 2) g.warnings_.push_back("vertex '" + g.vertices_[v] + "' has degree 2");
  }
  return g;
}

MetricGraph build_graph(const GraphSpec& spec) { return MetricGraph::build(spec); }

std::optional<VertexIndex> MetricGraph::find_vertex(std::string_view name) const {
  for (VertexIndex v = 0; v < vertices_.size(); ++v) {
    if (vertices_[v] == name) return v;
  }
  return std::nullopt;
}

std::optional<EdgeIndex> MetricGraph::find_edge(std::string_view id) const {
  for (EdgeIndex e = 0; e < edges_.size(); ++e) {
    if (edges_[e].id == id) return e;
  }
  return std::nullopt;
}

VertexIndex MetricGraph::vertex(std::string_view name) const {
  if (auto v = find_vertex(name)) return *v;
  throw QueryError("unknown vertex '" + std::string(name) + "'");
}

EdgeIndex MetricGraph::edge_index(std::string_view id) const {
  if (auto e = find_edge(id)) return *e;
  throw QueryError("unknown edge '" + std::string(id) + "'");
}

VertexIndex MetricGraph::tail(DirectedEdge d) const {
  const Edge& e = edges_.at(d.edge);
  return d.dir == Direction::Forward ? e.a : e.b;
}

VertexIndex MetricGraph::head(DirectedEdge d) const {
  const Edge& e = edges_.at(d.edge);
  return d.dir == Direction::Forward ? e.b : e.a;
}

std::vector<EventTime> MetricGraph::travel_times() const {
  std::vector<EventTime> out;
  out.reserve(edges_.size());
  for (const auto& e : edges_) out.push_back(e.travel_time);
  return out;
}

bool MetricGraph::has_degree_two_vertex() const {
  return std::any_of(ports_.begin(), ports_.end(), [](const auto& p) { return p.size() == 2; });
}

bool MetricGraph::is_three_star() const {
  if (edges_.size() != 3 || vertices_.size() != 4) return false;
  std::size_t centres = 0;
  std::size_t leaves = 0;
  for (const auto& p : ports_) {
    if (p.size() == 3) ++centres;
    if (p.size() == 1) ++leaves;
  }
  return centres == 1 && leaves == 3;
}

// ---------------------------------------------------------------------------
// Cycle space

CycleData cycle_rank(const MetricGraph& g) {
  const std::size_t nv = g.vertex_count();
  const std::size_t ne = g.edge_count();
  CycleData cd;
  cd.in_tree.assign(ne, false);
  cd.parent_edge.assign(nv, std::nullopt);

  VertexIndex root = 0;
  for (VertexIndex v = 1; v < nv; ++v) {
    if (g.vertex_name(v) < g.vertex_name(root)) root = v;
  }

  std::vector<bool> seen(nv, false);
  std::deque<VertexIndex> queue{root};
  seen[root] = true;
  while (!queue.empty()) {
    const VertexIndex v = queue.front();
    queue.pop_front();
    cd.bfs_order.push_back(v);
    for (const auto& port : g.ports(v)) {
      const VertexIndex w = g.head(port);
      if (seen[w]) continue;
      seen[w] = true;
      cd.in_tree[port.edge] = true;
      cd.parent_edge[w] = port.edge;
      queue.push_back(w);
    }
  }

  for (EdgeIndex e = 0; e < ne; ++e) {
    (cd.in_tree[e] ? cd.tree_edges : cd.cross_edges).push_back(e);
  }
  cd.beta = cd.cross_edges.size();

  // Depth via BFS order for the tree path between the cross edge endpoints.
  std::vector<std::size_t> depth(nv, 0);
  for (const VertexIndex v : cd.bfs_order) {
    if (cd.parent_edge[v]) {
      const Edge& pe = g.edge(*cd.parent_edge[v]);
      const VertexIndex parent = pe.a == v ? pe.b : pe.a;
      depth[v] = depth[parent] + 1;
    }
  }
  auto step_up = [&](VertexIndex v, Code& c) {
    const EdgeIndex pe = *cd.parent_edge[v];
    c.parities[pe] ^= 1;
    const Edge& e = g.edge(pe);
    return e.a == v ? e.b : e.a;
  };
  for (const EdgeIndex cross : cd.cross_edges) {
    Code c{std::vector<std::uint8_t>(ne, 0)};
    c.parities[cross] = 1;
    VertexIndex u = g.edge(cross).a;
    VertexIndex w = g.edge(cross).b;
    while (depth[u] > depth[w]) u = step_up(u, c);
    while (depth[w] > depth[u]) w = step_up(w, c);
    while (u != w) {
      u = step_up(u, c);
      w = step_up(w, c);
    }
    cd.fundamental_cycles.push_back(std::move(c));
  }
  return cd;
}

std::vector<std::uint8_t> boundary(const MetricGraph& g, const Code& chain) {
  if (chain.parities.size() != g.edge_count()) throw ConfigError("chain length does not match edge count");
  std::vector<std::uint8_t> out(g.vertex_count(), 0);
  for (EdgeIndex e = 0; e < g.edge_count(); ++e) {
    if (!chain.parities[e]) continue;
    out[g.edge(e).a] ^= 1;
    out[g.edge(e).b] ^= 1;
  }
  return out;
}

std::vector<Code> codes(const MetricGraph& g, VertexIndex from, VertexIndex to) {
  if (from >= g.vertex_count() || to >= g.vertex_count()) throw QueryError("code endpoint out of range");
  const CycleData cd = cycle_rank(g);
  if (cd.beta > 24) throw ResourceLimitError("cycle rank too large to enumerate codes");

  std::vector<Code> out;
  out.reserve(std::size_t{1} << cd.beta);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << cd.beta); ++mask) {
    Code c{std::vector<std::uint8_t>(g.edge_count(), 0)};
    std::vector<std::uint8_t> residual(g.vertex_count(), 0);
    residual[from] ^= 1;
    residual[to] ^= 1;
    for (std::size_t k = 0; k < cd.beta; ++k) {
      if (!((mask >> k) & 1U)) continue;
      const EdgeIndex e = cd.cross_edges[k];
      c.parities[e] = 1;
      residual[g.edge(e).a] ^= 1;
      residual[g.edge(e).b] ^= 1;
    }
    // Leaves first: each non-root vertex settles its residual through its
    // parent edge.
    for (auto it = cd.bfs_order.rbegin(); it != cd.bfs_order.rend(); ++it) {
      const VertexIndex v = *it;
      if (!cd.parent_edge[v] || !residual[v]) continue;
      const EdgeIndex pe = *cd.parent_edge[v];
      c.parities[pe] = 1;
      const Edge& e = g.edge(pe);
      residual[v] = 0;
      residual[e.a == v ? e.b : e.a] ^= 1;
    }
    out.push_back(std::move(c));
  }
  return out;
}

bool even_cycle_exists(const MetricGraph& g, std::span<const std::int64_t> weights) {
  if (weights.size() != g.edge_count()) throw ConfigError("one weight per edge required");
  const CycleData cd = cycle_rank(g);
  if (cd.beta == 0) return false;
  if (cd.beta >= 2) return true;
  std::int64_t total = 0;
  for (EdgeIndex e = 0; e < g.edge_count(); ++e) {
    if (cd.fundamental_cycles.front().parities[e]) total += weights[e];
  }
  return total % 2 == 0;
}

// ---------------------------------------------------------------------------
// Travel time through a potential

double travel_time_from_potential(std::span<const PotentialSample> samples, double energy) {
  if (samples.size() < 2) throw TurningPointError("need at least two potential samples");
  std::vector<double> f(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (i > 0 && !(samples[i].position > samples[i - 1].position)) {
      throw ConfigError("potential samples must be strictly increasing in position");
    }
    const double gap = energy - samples[i].value;
    if (!(gap > 0.0)) {
      throw TurningPointError("energy does not exceed the potential at x = " + std::to_string(samples[i].position));
    }
    f[i] = 1.0 / std::sqrt(gap);
  }

  const std::size_t n = samples.size() - 1;  // intervals
  if (n == 1) return 0.5 * (samples[1].position - samples[0].position) * (f[0] + f[1]);

  auto x = [&](std::size_t i) { return samples[i].position; };
  double sum = 0.0;
  const std::size_t paired = n - (n % 2);
  for (std::size_t i = 0; i < paired; i += 2) {
    const double h0 = x(i + 1) - x(i);
    const double h1 = x(i + 2) - x(i + 1);
    const double hs = h0 + h1;
    sum += hs / 6.0 * ((2.0 - h1 / h0) * f[i] + hs * hs / (h0 * h1) * f[i + 1] + (2.0 - h0 / h1) * f[i + 2]);
  }
  if (n % 2 == 1) {
    // Last interval from the quadratic through the final three samples.
    const double h0 = x(n - 1) - x(n - 2);
    const double h1 = x(n) - x(n - 1);
    const double alpha = (2.0 * h1 * h1 + 3.0 * h0 * h1) / (6.0 * (h0 + h1));
    const double beta = (h1 * h1 + 3.0 * h0 * h1) / (6.0 * h0);
    const double eta = h1 * h1 * h1 / (6.0 * h0 * (h0 + h1));
    sum += alpha * f[n] + beta * f[n - 1] - eta * f[n - 2];
  }
  return sum;
}

}  // namespace pktgraph
