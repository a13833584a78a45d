#pragma once

// File formats:
//
// Graph spec (JSON, unknown fields rejected):
//   {"basis": [{"name": "t0", "witness": 1.0}, ...],
//    "vertices": ["c", "l1", ...],
//    "edges": [{"id": "e1", "from": "c", "to": "l1", "time": {"t0": "1/2"}}, ...]}
// Event log (JSON lines, one departure per line):
//   {"t_real": ..., "t_exact": {"sym": "p/q"}, "vertex": "c" | null,
//    "edge": "e1", "dir": "forward" | "backward", "amp": ...}
// Count series (CSV): t,N,N_e_<edge>...,N_dep_<vertex>_<edge>...
// Prediction report (JSON, keys sorted).

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "pktgraph/asymptotics.hpp"
#include "pktgraph/metric_graph.hpp"
#include "pktgraph/packet_dynamics.hpp"
#include "pktgraph/time_algebra.hpp"

namespace pktgraph {

// "%.17g".
std::string format_double(double v);

std::string basis_to_json(const TimeBasis& basis);
TimeBasis parse_basis_json(std::string_view text);

std::string event_time_to_json(const EventTime& t);
EventTime parse_event_time_json(std::string_view text, const TimeBasis& basis);

std::string graph_spec_to_json(const GraphSpec& spec);
GraphSpec parse_graph_spec(std::string_view text);
GraphSpec load_graph_spec(const std::filesystem::path& path);

std::string report_to_json(const PredictionReport& report);
PredictionReport parse_report_json(std::string_view text);

void write_event_log_jsonl(const EventLog& log, std::ostream& out);

void write_series_csv(const CountSeries& series, std::ostream& out);
std::string series_csv(const CountSeries& series);

// Column-oriented view of a count series CSV.
struct SeriesTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  // Index of a column by exact header name; throws ConfigError if absent.
  std::size_t column(std::string_view name) const;
  std::vector<double> values(std::size_t column) const;
};

SeriesTable parse_series_csv(std::string_view text);
SeriesTable to_table(const CountSeries& series);

std::string read_text_file(const std::filesystem::path& path);
// Writes through a temporary sibling and renames, so a failed run leaves no
// partial file behind.
void write_text_file(const std::filesystem::path& path, std::string_view content);

}  // namespace pktgraph
