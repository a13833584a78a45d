#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pktgraph/asymptotics.hpp"
#include "pktgraph/packet_dynamics.hpp"
#include "pktgraph/serialization.hpp"

namespace pktgraph {

struct FitResult {
  double estimate = 0.0;
  double std_error = 0.0;
  std::size_t rows = 0;
};

// Least squares for y = c * t^degree over the trailing `window` fraction of
// the rows. Needs at least 10 rows in the window.
FitResult fit_leading_coefficient(std::span<const double> t, std::span<const double> y, int degree,
                                  double window);
FitResult fit_leading_coefficient(const SeriesTable& series, const std::string& column, int degree,
                                  double window);

// Real instant to exact time: a dyadic multiple (2^-20 resolution) of the
// first basis symbol.
EventTime real_to_time(double t, const TimeBasis& basis);

struct SampleGrid {
  std::size_t count = 200;
  bool log_spacing = false;
  // Log grids start at this fraction of the last sample.
  double log_start_fraction = 1.0 / 16.0;
};

// `count` sample instants ending at `last`, sorted.
std::vector<EventTime> sample_times(const EventTime& last, const SampleGrid& grid);

struct Comparison {
  std::string quantity;
  double predicted = 0.0;
  double measured = 0.0;
  double rel_error = 0.0;
  std::optional<double> std_error;
};

struct Stabilization {
  double last_change = 0.0;
  std::int64_t final_count = 0;
  bool accepted = false;
};

// Rank-one stabilization from a sampled N column: last change point, and
// accepted once N is constant over the trailing 25% of the sampled range and
// that range exceeds 4x the last change point.
Stabilization detect_stabilization(std::span<const double> t, std::span<const double> n);

struct CompareOutcome {
  std::vector<Comparison> rows;
  std::optional<Stabilization> stabilization;
};

// Fits the measured columns that the report's regime makes predictions for.
CompareOutcome compare_series(const SeriesTable& series, const PredictionReport& report, double window);

struct ExperimentConfig {
  GraphSpec graph;
  std::string start_edge;
  // Offset expression; bare rationals are fractions of the start edge.
  std::string offset = "1/2";
  // Endpoint vertex name the packet heads toward, or "forward"/"backward".
  std::string direction;
  bool both_directions = false;
  double horizon = 0.0;
  SampleGrid grid;
  // Empty: every (endpoint, edge) incidence.
  std::vector<std::pair<std::string, std::string>> departure_pairs;
  double fit_window = 0.5;
  SimulationOptions simulation;
  // Return the event log in the result.
  bool keep_log = false;
};

InitialCondition resolve_initial_condition(const MetricGraph& g, const std::string& edge,
                                           const std::string& offset, const std::string& direction,
                                           bool both_directions);

struct ExperimentResult {
  PredictionReport report;
  CountSeries series;
  CompareOutcome comparison;
  std::size_t records = 0;
  std::optional<EventLog> log;
};

ExperimentResult run_experiment(const ExperimentConfig& config);

std::string comparison_to_json(const ExperimentResult& result);
std::string comparison_table(const CompareOutcome& outcome);

}  // namespace pktgraph
