#pragma once

// Event-driven packet dynamics on a metric graph.
//
// A packet is identified by (directed edge, departure time). When packets
// reach a vertex of degree m, every packet arriving there at the same exact
// time is batched and the vertex emits one packet into each of its m ports
// (one reflected, m-1 transmitted). Packets sharing a departure record are
// merged by construction. The EventLog keeps every departure and answers the
// counting queries N(t), N_e(t), segment counts and per-vertex departure
// counts.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pktgraph/metric_graph.hpp"
#include "pktgraph/time_algebra.hpp"

namespace pktgraph {

struct InitialCondition {
  EdgeIndex edge = 0;
  // Travel time from endpoint a to the start point; strictly inside the edge.
  EventTime offset;
  Direction direction = Direction::Forward;
  bool emit_both_directions = false;
  double amplitude = 1.0;
};

struct SimulationOptions {
  double epsilon = kDefaultEpsilon;
  std::uint64_t max_records = 100'000'000;
  bool track_amplitude = false;
};

// Outgoing directed edges for a batch of packets arriving at `vertex`; each
// incoming entry names the direction of travel of an arriving packet.
std::vector<DirectedEdge> scatter(const MetricGraph& g, VertexIndex vertex,
                                  std::span<const DirectedEdge> incoming);

// Vertex scattering amplitudes. Degree m >= 2: reflection (2-m)/m,
// transmission 2/m. A degree-1 vertex reflects with -1 (Dirichlet end).
double reflection_coefficient(std::size_t degree);
double transmission_coefficient(std::size_t degree);
// Row-major m x m matrix, entry (out, in).
std::vector<double> scattering_matrix(std::size_t degree);

class EventLog {
 public:
  struct Record {
    EventTime time;
    // Empty for the initial packet, whose time is the virtual departure
    // instant from the tail of its directed edge (non-positive).
    std::optional<VertexIndex> vertex;
    DirectedEdge edge;
    std::optional<double> amplitude;
  };

  const MetricGraph& graph() const { return *graph_; }
  const IntegerFrame& frame() const { return frame_; }
  const EventTime& horizon() const { return horizon_; }
  // Latest instant at which every packet in flight is guaranteed logged.
  const EventTime& reliable_horizon() const { return reliable_; }
  bool tracks_amplitude() const { return !amplitude_.empty(); }

  std::size_t size() const { return slot_.size(); }
  Record record(std::size_t i) const;
  EventTime time(std::size_t i) const;
  double time_real(std::size_t i) const;
  DirectedEdge directed_edge(std::size_t i) const;
  bool is_initial(std::size_t i) const;
  std::span<const std::size_t> initial_records() const { return initial_; }

  // Number of packets in flight at t. Departures at exactly t count, arrivals
  // at exactly t do not. With merge_crossings, packets sharing a localization
  // point (opposite directions crossing, or a batch just leaving a vertex)
  // count once.
  std::int64_t packet_count(const EventTime& t, bool merge_crossings = false) const;
  std::int64_t edge_count(EdgeIndex e, const EventTime& t) const;
  // Packets whose position at t (travel time measured from endpoint a) lies
  // in [from_offset, from_offset + tau].
  std::int64_t segment_count(EdgeIndex e, const EventTime& from_offset, const EventTime& tau,
                             const EventTime& t) const;
  // Departure records from vertex a onto edge e with time <= t.
  std::int64_t departure_count(VertexIndex a, EdgeIndex e, const EventTime& t) const;

 private:
  friend EventLog simulate(const MetricGraph&, const InitialCondition&, const EventTime&,
                           const SimulationOptions&);

  std::span<const std::int64_t> coeffs(std::size_t i) const {
    return {coeffs_.data() + i * rank_, rank_};
  }
  static std::uint32_t slot_of(DirectedEdge d) { return d.edge * 2 + static_cast<std::uint32_t>(d.dir); }

  Ordering order(std::size_t record, const EventTime& t, double t_real) const;
  // Records in `list` with time < t (or <= t when inclusive).
  std::size_t count_before(std::span<const std::size_t> list, const EventTime& t, bool inclusive) const;
  std::int64_t window_count(std::span<const std::size_t> list, const EventTime& lo, bool lo_inclusive,
                            const EventTime& hi) const;
  std::vector<std::size_t> initial_on(std::uint32_t slot) const;
  void require_reliable(const EventTime& t) const;

  std::shared_ptr<const MetricGraph> graph_;
  IntegerFrame frame_;
  EventTime horizon_;
  EventTime reliable_;
  double epsilon_ = kDefaultEpsilon;
  std::size_t rank_ = 0;

  std::vector<std::int64_t> coeffs_;
  std::vector<std::uint32_t> slot_;
  std::vector<double> amplitude_;
  std::vector<std::size_t> initial_;
  // Vertex departures per directed edge slot, in time order.
  std::vector<std::vector<std::size_t>> by_slot_;
};

// Runs the dynamics until every vertex event at time <= horizon is processed.
EventLog simulate(const MetricGraph& g, const InitialCondition& init, const EventTime& horizon,
                  const SimulationOptions& options = {});

struct CountRow {
  EventTime t_exact;
  double t = 0.0;
  std::int64_t total = 0;
  std::vector<std::int64_t> per_edge;
  std::vector<std::int64_t> departures;
};

struct CountSeries {
  std::vector<std::string> edge_ids;
  // (vertex name, edge id) per departure column.
  std::vector<std::pair<std::string, std::string>> pairs;
  std::vector<CountRow> rows;
};

// Samples must be sorted and within the reliable horizon.
CountSeries count_series(const EventLog& log, std::span<const EventTime> sample_times,
                         std::span<const std::pair<VertexIndex, EdgeIndex>> pairs = {});

}  // namespace pktgraph
