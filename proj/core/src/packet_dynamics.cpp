#include "pktgraph/packet_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <set>
#include <sstream>
#include <unordered_set>

namespace pktgraph {

namespace {

// Witness differences larger than this are trusted without an exact check.
constexpr double kWitnessSlack = 1e-7;

struct Pending {
  double real;
  std::size_t record;
};

struct PendingLater {
  bool operator()(const Pending& x, const Pending& y) const {
    if (x.real != y.real) return x.real > y.real;
    return x.record > y.record;
  }
};

Ordering order_with_slack(double lhs_real, double rhs_real, const EventTime& lhs_exact_fallback,
                          const EventTime& rhs, double epsilon) {
  const double diff = lhs_real - rhs_real;
  const double slack = kWitnessSlack * std::max(1.0, std::abs(rhs_real));
  if (diff < -slack) return Ordering::Less;
  if (diff > slack) return Ordering::Greater;
  return compare(lhs_exact_fallback, rhs, epsilon);
}

}  // namespace

// ---------------------------------------------------------------------------
// Scattering

std::vector<DirectedEdge> scatter(const MetricGraph& g, VertexIndex vertex,
                                  std::span<const DirectedEdge> incoming) {
  if (vertex >= g.vertex_count()) throw QueryError("scatter at unknown vertex");
  if (incoming.empty()) throw ConfigError("scatter needs at least one incoming packet");
  for (const auto& d : incoming) {
    if (d.edge >= g.edge_count() || g.head(d) != vertex) {
      throw ConfigError("incoming packet on edge is not adjacent to vertex '" + g.vertex_name(vertex) + "'");
    }
  }
  const auto ports = g.ports(vertex);
  return {ports.begin(), ports.end()};
}

double reflection_coefficient(std::size_t degree) {
  if (degree == 0) throw ConfigError("vertex degree must be positive");
  if (degree == 1) return -1.0;
  return (2.0 - static_cast<double>(degree)) / static_cast<double>(degree);
}

double transmission_coefficient(std::size_t degree) {
  if (degree == 0) throw ConfigError("vertex degree must be positive");
  return 2.0 / static_cast<double>(degree);
}

std::vector<double> scattering_matrix(std::size_t degree) {
  const double r = reflection_coefficient(degree);
  const double t = transmission_coefficient(degree);
  std::vector<double> s(degree * degree, t);
  for (std::size_t i = 0; i < degree; ++i) s[i * degree + i] = r;
  return s;
}

// ---------------------------------------------------------------------------
// Simulation

EventLog simulate(const MetricGraph& g, const InitialCondition& init, const EventTime& horizon,
                  const SimulationOptions& options) {
  if (init.edge >= g.edge_count()) throw ConfigError("initial edge out of range");
  const Edge& start = g.edge(init.edge);
  const double eps = options.epsilon;
  if (compare(init.offset, EventTime{}, eps) != Ordering::Greater ||
      compare(init.offset, start.travel_time, eps) != Ordering::Less) {
    throw ConfigError("initial offset must lie strictly inside edge '" + start.id + "'");
  }
  if (compare(horizon, EventTime{}, eps) != Ordering::Greater) throw ConfigError("horizon must be positive");

  EventLog log;
  log.graph_ = std::make_shared<const MetricGraph>(g);
  log.horizon_ = horizon;
  log.epsilon_ = eps;
  log.rank_ = g.basis().rank();

  std::vector<EventTime> generators = g.travel_times();
  generators.push_back(init.offset);
  log.frame_ = IntegerFrame(g.basis(), generators);
  const IntegerFrame& frame = log.frame_;
  const std::size_t rank = log.rank_;

  EdgeIndex longest = 0;
  double shortest = std::numeric_limits<double>::infinity();
  for (EdgeIndex e = 0; e < g.edge_count(); ++e) {
    if (g.edge(e).travel_real > g.edge(longest).travel_real) longest = e;
    shortest = std::min(shortest, g.edge(e).travel_real);
  }
  log.reliable_ = horizon - g.edge(longest).travel_time;

  // Coefficients grow by at most one edge vector per traversal; bound them
  // before running so the int64 frame cannot overflow.
  std::vector<std::int64_t> edge_enc(g.edge_count() * rank);
  long double max_edge_coeff = 0;
  for (EdgeIndex e = 0; e < g.edge_count(); ++e) {
    frame.encode(g.edge(e).travel_time, std::span(edge_enc).subspan(e * rank, rank));
    for (std::size_t k = 0; k < rank; ++k) {
      max_edge_coeff = std::max(max_edge_coeff, std::abs(static_cast<long double>(edge_enc[e * rank + k])));
    }
  }
  const std::vector<std::int64_t> offset_enc = frame.encode(init.offset);
  long double max_offset_coeff = 0;
  for (std::size_t k = 0; k < rank; ++k) {
    max_offset_coeff = std::max(max_offset_coeff, std::abs(static_cast<long double>(offset_enc[k])));
  }
  const long double traversals = std::floor(static_cast<long double>(to_real(horizon)) / shortest) + 4;
  const long double bound = 2 * max_offset_coeff + traversals * max_edge_coeff;
  if (bound >= static_cast<long double>(std::int64_t{1} << 62)) {
    throw ResourceLimitError("horizon too long for the 64-bit integer time frame");
  }

  std::priority_queue<Pending, std::vector<Pending>, PendingLater> queue;
  std::vector<std::int64_t> scratch(rank);

  auto arrival_of = [&](std::size_t record, std::span<std::int64_t> out) {
    const std::uint32_t slot = log.slot_[record];
    const auto dep = log.coeffs(record);
    const EdgeIndex e = (slot & 0x7fffffffU) / 2;
    for (std::size_t k = 0; k < rank; ++k) out[k] = dep[k] + edge_enc[e * rank + k];
  };

  auto append = [&](std::span<const std::int64_t> time, DirectedEdge d, bool initial, double amp) {
    if (log.slot_.size() >= options.max_records) {
      throw ResourceLimitError("simulation exceeded " + std::to_string(options.max_records) + " departure records");
    }
    const std::size_t idx = log.slot_.size();
    log.coeffs_.insert(log.coeffs_.end(), time.begin(), time.end());
    log.slot_.push_back(EventLog::slot_of(d) | (initial ? 0x80000000U : 0U));
    if (options.track_amplitude) log.amplitude_.push_back(amp);
    if (initial) {
      log.initial_.push_back(idx);
    } else {
      log.by_slot_[EventLog::slot_of(d)].push_back(idx);
    }
    arrival_of(idx, scratch);
    queue.push({frame.evaluate(scratch), idx});
  };

  log.by_slot_.resize(g.edge_count() * 2);

  // The initial packet departs virtually from the tail of its directed edge:
  // at -offset going forward, at -(t_e - offset) going backward.
  std::vector<std::pair<DirectedEdge, std::vector<std::int64_t>>> seeds;
  auto seed = [&](Direction dir) {
    std::vector<std::int64_t> t(rank);
    if (dir == Direction::Forward) {
      for (std::size_t k = 0; k < rank; ++k) t[k] = -offset_enc[k];
    } else {
      for (std::size_t k = 0; k < rank; ++k) t[k] = offset_enc[k] - edge_enc[init.edge * rank + k];
    }
    seeds.push_back({{init.edge, dir}, std::move(t)});
  };
  seed(init.direction);
  if (init.emit_both_directions) seed(reversed(init.direction));
  std::stable_sort(seeds.begin(), seeds.end(), [&](const auto& x, const auto& y) {
    return frame.evaluate(x.second) < frame.evaluate(y.second);
  });
  for (const auto& [d, t] : seeds) append(t, d, true, init.amplitude);

  const double horizon_real = to_real(horizon);
  std::vector<std::int64_t> batch_time(rank);
  std::vector<std::int64_t> other(rank);
  std::vector<std::size_t> batch;
  std::vector<std::pair<VertexIndex, std::size_t>> arrivals;  // (head vertex, record)
  std::vector<double> amp_in;

  while (!queue.empty()) {
    const Pending top = queue.top();
    arrival_of(top.record, batch_time);
    if (order_with_slack(top.real, horizon_real, frame.decode(batch_time), horizon, eps) == Ordering::Greater) {
      break;
    }
    queue.pop();
    batch.assign(1, top.record);
    while (!queue.empty() && queue.top().real - top.real <= eps) {
      arrival_of(queue.top().record, other);
      if (other != batch_time) {
        std::ostringstream msg;
        msg << "ambiguous ordering between event times " << to_string(frame.decode(batch_time)) << " and "
            << to_string(frame.decode(other)) << " (epsilon " << eps << ")";
        throw AmbiguousOrderingError(msg.str());
      }
      batch.push_back(queue.top().record);
      queue.pop();
    }

    arrivals.clear();
    for (const std::size_t r : batch) {
      arrivals.push_back({g.head(log.directed_edge(r)), r});
    }
    std::sort(arrivals.begin(), arrivals.end(), [&](const auto& x, const auto& y) {
      if (x.first != y.first) return x.first < y.first;
      return log.slot_of(log.directed_edge(x.second)) < log.slot_of(log.directed_edge(y.second));
    });

    for (std::size_t i = 0; i < arrivals.size();) {
      const VertexIndex v = arrivals[i].first;
      std::size_t j = i;
      while (j < arrivals.size() && arrivals[j].first == v) ++j;
      const auto ports = g.ports(v);
      const std::size_t m = ports.size();

      amp_in.assign(m, 0.0);
      if (options.track_amplitude) {
        for (std::size_t k = i; k < j; ++k) {
          const DirectedEdge in = log.directed_edge(arrivals[k].second);
          const DirectedEdge port{in.edge, reversed(in.dir)};
          const auto pos = std::lower_bound(ports.begin(), ports.end(), port) - ports.begin();
          amp_in[static_cast<std::size_t>(pos)] += log.amplitude_[arrivals[k].second];
        }
      }
      const double refl = reflection_coefficient(m);
      const double trans = transmission_coefficient(m);
      double amp_total = 0.0;
      for (const double a : amp_in) amp_total += a;

      for (std::size_t p = 0; p < m; ++p) {
        const double amp = trans * amp_total + (refl - trans) * amp_in[p];
        append(batch_time, ports[p], false, amp);
      }
      i = j;
    }
  }
  return log;
}

// ---------------------------------------------------------------------------
// EventLog accessors

EventLog::Record EventLog::record(std::size_t i) const {
  Record r;
  r.time = time(i);
  r.edge = directed_edge(i);
  if (!is_initial(i)) r.vertex = graph_->tail(r.edge);
  if (tracks_amplitude()) r.amplitude = amplitude_[i];
  return r;
}

EventTime EventLog::time(std::size_t i) const { return frame_.decode(coeffs(i)); }

double EventLog::time_real(std::size_t i) const { return frame_.evaluate(coeffs(i)); }

DirectedEdge EventLog::directed_edge(std::size_t i) const {
  const std::uint32_t slot = slot_[i] & 0x7fffffffU;
  return {slot / 2, static_cast<Direction>(slot % 2)};
}

bool EventLog::is_initial(std::size_t i) const { return (slot_[i] & 0x80000000U) != 0; }

Ordering EventLog::order(std::size_t record, const EventTime& t, double t_real) const {
  const double r = frame_.evaluate(coeffs(record));
  const double diff = r - t_real;
  const double slack = kWitnessSlack * std::max(1.0, std::abs(t_real));
  if (diff < -slack) return Ordering::Less;
  if (diff > slack) return Ordering::Greater;
  return compare(time(record), t, epsilon_);
}

std::size_t EventLog::count_before(std::span<const std::size_t> list, const EventTime& t, bool inclusive) const {
  const double t_real = to_real(t);
  const auto it = std::partition_point(list.begin(), list.end(), [&](std::size_t r) {
    const Ordering o = order(r, t, t_real);
    return inclusive ? o != Ordering::Greater : o == Ordering::Less;
  });
  return static_cast<std::size_t>(it - list.begin());
}

std::int64_t EventLog::window_count(std::span<const std::size_t> list, const EventTime& lo, bool lo_inclusive,
                                    const EventTime& hi) const {
  const auto upper = static_cast<std::int64_t>(count_before(list, hi, true));
  const auto lower = static_cast<std::int64_t>(count_before(list, lo, !lo_inclusive));
  return std::max<std::int64_t>(0, upper - lower);
}

std::vector<std::size_t> EventLog::initial_on(std::uint32_t slot) const {
  std::vector<std::size_t> out;
  for (const std::size_t r : initial_) {
    if ((slot_[r] & 0x7fffffffU) == slot) out.push_back(r);
  }
  return out;
}

void EventLog::require_reliable(const EventTime& t) const {
  if (compare(t, EventTime{}, epsilon_) == Ordering::Less) throw QueryError("query time is negative");
  if (compare(t, reliable_, epsilon_) == Ordering::Greater) {
    throw QueryError("query time " + to_string(t) + " beyond the reliable horizon " + to_string(reliable_));
  }
}

// ---------------------------------------------------------------------------
// Count queries

std::int64_t EventLog::edge_count(EdgeIndex e, const EventTime& t) const {
  if (e >= graph_->edge_count()) throw QueryError("unknown edge index");
  require_reliable(t);
  const EventTime lo = t - graph_->edge(e).travel_time;
  std::int64_t total = 0;
  for (const Direction dir : {Direction::Forward, Direction::Backward}) {
    const std::uint32_t slot = slot_of({e, dir});
    total += window_count(by_slot_[slot], lo, false, t);
    total += window_count(initial_on(slot), lo, false, t);
  }
  return total;
}

std::int64_t EventLog::packet_count(const EventTime& t, bool merge_crossings) const {
  std::int64_t total = 0;
  if (!merge_crossings) {
    for (EdgeIndex e = 0; e < graph_->edge_count(); ++e) total += edge_count(e, t);
    return total;
  }

  require_reliable(t);
  std::set<VertexIndex> at_vertex;
  for (EdgeIndex e = 0; e < graph_->edge_count(); ++e) {
    const Edge& edge = graph_->edge(e);
    const EventTime lo = t - edge.travel_time;
    std::unordered_set<std::string> interior;
    for (const Direction dir : {Direction::Forward, Direction::Backward}) {
      const std::uint32_t slot = slot_of({e, dir});
      std::vector<std::size_t> members = initial_on(slot);
      const auto& list = by_slot_[slot];
      const std::size_t first = count_before(list, lo, true);
      const std::size_t last = count_before(list, t, true);
      members.insert(members.end(), list.begin() + static_cast<std::ptrdiff_t>(first),
                     list.begin() + static_cast<std::ptrdiff_t>(last));
      for (const std::size_t r : members) {
        const Ordering o = order(r, t, to_real(t));
        if (o == Ordering::Greater || order(r, lo, to_real(lo)) != Ordering::Greater) continue;
        if (o == Ordering::Equal) {
          at_vertex.insert(graph_->tail({e, dir}));
          continue;
        }
        const EventTime elapsed = t - time(r);
        const EventTime position = dir == Direction::Forward ? elapsed : edge.travel_time - elapsed;
        interior.insert(to_string(position));
      }
    }
    total += static_cast<std::int64_t>(interior.size());
  }
  return total + static_cast<std::int64_t>(at_vertex.size());
}

std::int64_t EventLog::segment_count(EdgeIndex e, const EventTime& from_offset, const EventTime& tau,
                                     const EventTime& t) const {
  if (e >= graph_->edge_count()) throw QueryError("unknown edge index");
  const EventTime& te = graph_->edge(e).travel_time;
  const EventTime to_offset = from_offset + tau;
  if (compare(from_offset, EventTime{}, epsilon_) == Ordering::Less || compare(tau, EventTime{}, epsilon_) == Ordering::Less ||
      compare(to_offset, te, epsilon_) == Ordering::Greater) {
    throw QueryError("segment lies outside edge '" + graph_->edge(e).id + "'");
  }
  require_reliable(t);

  std::int64_t total = 0;
  // Forward: elapsed s = t - d is the position, s in [f, f + tau] and s < t_e.
  {
    const std::uint32_t slot = slot_of({e, Direction::Forward});
    const EventTime lo = t - to_offset;
    const EventTime hi = t - from_offset;
    const bool lo_inclusive = !(to_offset == te);
    total += window_count(by_slot_[slot], lo, lo_inclusive, hi);
    total += window_count(initial_on(slot), lo, lo_inclusive, hi);
  }
  // Backward: position t_e - s, so s in [t_e - f - tau, t_e - f] and s < t_e.
  {
    const std::uint32_t slot = slot_of({e, Direction::Backward});
    const EventTime lo = t - te + from_offset;
    const EventTime hi = lo + tau;
    const bool lo_inclusive = !from_offset.is_zero();
    total += window_count(by_slot_[slot], lo, lo_inclusive, hi);
    total += window_count(initial_on(slot), lo, lo_inclusive, hi);
  }
  return total;
}

std::int64_t EventLog::departure_count(VertexIndex a, EdgeIndex e, const EventTime& t) const {
  if (e >= graph_->edge_count()) throw QueryError("unknown edge index");
  if (a >= graph_->vertex_count()) throw QueryError("unknown vertex index");
  const Edge& edge = graph_->edge(e);
  if (edge.a != a && edge.b != a) {
    throw QueryError("edge '" + edge.id + "' is not adjacent to vertex '" + graph_->vertex_name(a) + "'");
  }
  if (compare(t, horizon_, epsilon_) == Ordering::Greater) {
    throw QueryError("departure query beyond the simulated horizon");
  }
  std::int64_t total = 0;
  for (const Direction dir : {Direction::Forward, Direction::Backward}) {
    if (graph_->tail({e, dir}) != a) continue;
    total += static_cast<std::int64_t>(count_before(by_slot_[slot_of({e, dir})], t, true));
  }
  return total;
}

CountSeries count_series(const EventLog& log, std::span<const EventTime> sample_times,
                         std::span<const std::pair<VertexIndex, EdgeIndex>> pairs) {
  const MetricGraph& g = log.graph();
  CountSeries series;
  for (const auto& e : g.edges()) series.edge_ids.push_back(e.id);
  for (const auto& [v, e] : pairs) {
    if (v >= g.vertex_count() || e >= g.edge_count()) throw QueryError("departure pair out of range");
    series.pairs.emplace_back(g.vertex_name(v), g.edge(e).id);
  }
  for (std::size_t i = 1; i < sample_times.size(); ++i) {
    if (compare(sample_times[i], sample_times[i - 1]) == Ordering::Less) {
      throw ConfigError("sample times must be sorted");
    }
  }
  series.rows.reserve(sample_times.size());
  for (const auto& t : sample_times) {
    CountRow row;
    row.t_exact = t;
    row.t = to_real(t);
    for (EdgeIndex e = 0; e < g.edge_count(); ++e) {
      row.per_edge.push_back(log.edge_count(e, t));
      row.total += row.per_edge.back();
    }
    for (const auto& [v, e] : pairs) row.departures.push_back(log.departure_count(v, e, t));
    series.rows.push_back(std::move(row));
  }
  return series;
}

}  // namespace pktgraph
