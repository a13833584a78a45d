#include "pktgraph/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "json.hpp"

namespace pktgraph {

FitResult fit_leading_coefficient(std::span<const double> t, std::span<const double> y, int degree, double window) {
  if (t.size() != y.size()) throw ConfigError("fit needs matching t and value columns");
  if (degree < 1) throw ConfigError("fit degree must be at least 1");
  if (!(window > 0.0 && window <= 1.0)) throw ConfigError("fit window must lie in (0, 1]");
  const std::size_t n = t.size();
  const auto used = static_cast<std::size_t>(std::floor(window * static_cast<double>(n)));
  if (used < 10) throw ConfigError("fit window holds " + std::to_string(used) + " rows; need at least 10");

  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = n - used; i < n; ++i) {
    const double x = std::pow(t[i], degree);
    sxx += x * x;
    sxy += x * y[i];
  }
  if (!(sxx > 0.0)) throw ConfigError("fit window has no positive times");
  FitResult fit;
  fit.rows = used;
  fit.estimate = sxy / sxx;
  double ssr = 0.0;
  for (std::size_t i = n - used; i < n; ++i) {
    const double r = y[i] - fit.estimate * std::pow(t[i], degree);
    ssr += r * r;
  }
  fit.std_error = std::sqrt(ssr / static_cast<double>(used - 1) / sxx);
  return fit;
}

FitResult fit_leading_coefficient(const SeriesTable& series, const std::string& column, int degree, double window) {
  return fit_leading_coefficient(series.values(0), series.values(series.column(column)), degree, window);
}

EventTime real_to_time(double t, const TimeBasis& basis) {
  if (basis.rank() == 0) throw ConfigError("cannot express a real time over an empty basis");
  constexpr double kScale = 1 << 20;
  const double units = std::round(t / basis.symbol(0).witness * kScale);
  return EventTime::symbol(basis, 0, Rational(BigInt(static_cast<std::int64_t>(units)), BigInt(1 << 20)));
}

std::vector<EventTime> sample_times(const EventTime& last, const SampleGrid& grid) {
  if (grid.count == 0) return {};
  if (!(to_real(last) > 0.0)) throw ConfigError("sample range must end at a positive time");
  std::vector<EventTime> out;
  out.reserve(grid.count);
  constexpr std::int64_t kDen = std::int64_t{1} << 24;
  for (std::size_t k = 1; k <= grid.count; ++k) {
    double fraction = 0.0;
    if (grid.log_spacing) {
      const double f0 = grid.log_start_fraction;
      if (!(f0 > 0.0 && f0 < 1.0)) throw ConfigError("log grid start fraction must lie in (0, 1)");
      const double u = grid.count == 1 ? 1.0 : static_cast<double>(k - 1) / static_cast<double>(grid.count - 1);
      fraction = std::pow(f0, 1.0 - u);
    } else {
      fraction = static_cast<double>(k) / static_cast<double>(grid.count);
    }
    const auto num = std::max<std::int64_t>(1, std::llround(fraction * static_cast<double>(kDen)));
    out.push_back(scale(last, Rational(BigInt(num), BigInt(kDen))));
  }
  return out;
}

Stabilization detect_stabilization(std::span<const double> t, std::span<const double> n) {
  if (t.empty() || t.size() != n.size()) throw ConfigError("stabilization needs a non-empty N column");
  Stabilization s;
  s.final_count = static_cast<std::int64_t>(std::llround(n.back()));
  std::size_t change = 0;
  for (std::size_t i = 1; i < n.size(); ++i) {
    if (n[i] != n[i - 1]) change = i;
  }
  s.last_change = t[change];
  const double t_end = t.back();
  bool constant_tail = true;
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (t[i] >= 0.75 * t_end && n[i] != n.back()) constant_tail = false;
  }
  s.accepted = constant_tail && t_end > 4.0 * s.last_change;
  return s;
}

namespace {

Comparison make_comparison(std::string quantity, double predicted, double measured,
                           std::optional<double> std_error = std::nullopt) {
  Comparison c;
  c.quantity = std::move(quantity);
  c.predicted = predicted;
  c.measured = measured;
  c.rel_error = predicted != 0.0 ? std::abs(measured - predicted) / std::abs(predicted) : std::abs(measured);
  c.std_error = std_error;
  return c;
}

}  // namespace

CompareOutcome compare_series(const SeriesTable& series, const PredictionReport& report, double window) {
  CompareOutcome out;
  const auto E = static_cast<int>(report.edges);
  switch (report.regime) {
    case Regime::Independent: {
      if (!report.C || !report.R) throw ConfigError("independent report lacks C or R");
      const FitResult c = fit_leading_coefficient(series, "N", E - 1, window);
      out.rows.push_back(make_comparison("C", *report.C, c.estimate, c.std_error));
      for (std::size_t col = 0; col < series.columns.size(); ++col) {
        if (series.columns[col].rfind("N_dep_", 0) != 0) continue;
        const FitResult r = fit_leading_coefficient(series, series.columns[col], E, window);
        out.rows.push_back(make_comparison("R:" + series.columns[col].substr(6), *report.R, r.estimate, r.std_error));
      }
      if (!series.rows.empty()) {
        const auto& last = series.rows.back();
        const double total = last[series.column("N")];
        for (std::size_t i = 0; i < report.edge_ids.size(); ++i) {
          const std::string name = "N_e_" + report.edge_ids[i];
          const auto it = std::find(series.columns.begin(), series.columns.end(), name);
          if (it == series.columns.end() || total <= 0.0) continue;
          const double share = last[static_cast<std::size_t>(it - series.columns.begin())] / total;
          out.rows.push_back(make_comparison("share:" + report.edge_ids[i],
                                             report.edge_times[i] * report.uniform_density, share));
        }
      }
      break;
    }
    case Regime::Rank1: {
      if (!report.rank1_limit) throw ConfigError("rank1 report lacks rank1_limit");
      const Stabilization s = detect_stabilization(series.values(0), series.values(series.column("N")));
      out.rows.push_back(make_comparison("N_final", static_cast<double>(*report.rank1_limit),
                                         static_cast<double>(s.final_count)));
      out.stabilization = s;
      break;
    }
    case Regime::StarRank2: {
      if (!report.rank2_slope) throw ConfigError("star_rank2 report lacks rank2_slope");
      const FitResult f = fit_leading_coefficient(series, "N", 1, window);
      out.rows.push_back(make_comparison("slope", *report.rank2_slope, f.estimate, f.std_error));
      break;
    }
    case Regime::Unsupported:
      break;
  }
  return out;
}

InitialCondition resolve_initial_condition(const MetricGraph& g, const std::string& edge, const std::string& offset,
                                           const std::string& direction, bool both_directions) {
  InitialCondition init;
  const auto e = g.find_edge(edge);
  if (!e) throw ConfigError("unknown start edge '" + edge + "'");
  init.edge = *e;
  const Edge& start = g.edge(*e);
  init.offset = parse_event_time(offset, g.basis(), &start.travel_time);

  if (direction == "forward") {
    init.direction = Direction::Forward;
  } else if (direction == "backward") {
    init.direction = Direction::Backward;
  } else {
    const auto v = g.find_vertex(direction);
    if (!v || (*v != start.a && *v != start.b)) {
      throw ConfigError("direction '" + direction + "' is not an endpoint of edge '" + edge + "'");
    }
    if (start.is_loop()) throw ConfigError("self-loop start edges need --dir forward or backward");
    init.direction = *v == start.b ? Direction::Forward : Direction::Backward;
  }
  init.emit_both_directions = both_directions;
  return init;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  if (!(config.horizon > 0.0)) throw ConfigError("horizon must be positive");
  if (!(config.fit_window > 0.0 && config.fit_window < 1.0)) throw ConfigError("fit window must lie in (0, 1)");
  const MetricGraph g = build_graph(config.graph);
  const InitialCondition init =
      resolve_initial_condition(g, config.start_edge, config.offset, config.direction, config.both_directions);

  ExperimentResult result;
  result.report = predict(g);

  const EventTime horizon = real_to_time(config.horizon, g.basis());
  EventLog log = simulate(g, init, horizon, config.simulation);
  result.records = log.size();
  if (!(to_real(log.reliable_horizon()) > 0.0)) {
    throw ConfigError("horizon must exceed the longest edge travel time");
  }

  std::vector<std::pair<VertexIndex, EdgeIndex>> pairs;
  if (config.departure_pairs.empty()) {
    for (EdgeIndex e = 0; e < g.edge_count(); ++e) {
      pairs.emplace_back(g.edge(e).a, e);
      if (!g.edge(e).is_loop()) pairs.emplace_back(g.edge(e).b, e);
    }
  } else {
    for (const auto& [v, e] : config.departure_pairs) pairs.emplace_back(g.vertex(v), g.edge_index(e));
  }

  const auto samples = sample_times(log.reliable_horizon(), config.grid);
  result.series = count_series(log, samples, pairs);
  if (result.series.rows.size() >= 20 || result.report.regime == Regime::Rank1) {
    result.comparison = compare_series(to_table(result.series), result.report, config.fit_window);
  }
  if (config.keep_log) result.log = std::move(log);
  return result;
}

std::string comparison_to_json(const ExperimentResult& result) {
  using nlohmann::json;
  json j;
  j["prediction"] = json::parse(report_to_json(result.report));
  j["records"] = result.records;
  json rows = json::array();
  for (const auto& c : result.comparison.rows) {
    json r{{"quantity", c.quantity}, {"predicted", c.predicted}, {"measured", c.measured}, {"rel_error", c.rel_error}};
    r["stderr"] = c.std_error ? json(*c.std_error) : json(nullptr);
    rows.push_back(std::move(r));
  }
  j["comparison"] = std::move(rows);
  if (const auto& s = result.comparison.stabilization) {
    j["stabilization"] = {{"last_change", s->last_change}, {"final_count", s->final_count}, {"accepted", s->accepted}};
  }
  return j.dump(2) + "\n";
}

std::string comparison_table(const CompareOutcome& outcome) {
  std::ostringstream out;
  out << std::left << std::setw(28) << "quantity" << std::setw(16) << "predicted" << std::setw(16) << "measured"
      << "rel_error\n";
  for (const auto& c : outcome.rows) {
    out << std::setw(28) << c.quantity << std::setw(16) << format_double(c.predicted).substr(0, 14) << std::setw(16)
        << format_double(c.measured).substr(0, 14) << c.rel_error << '\n';
  }
  if (outcome.stabilization) {
    out << "stabilization: last change at t=" << outcome.stabilization->last_change
        << ", final N=" << outcome.stabilization->final_count
        << (outcome.stabilization->accepted ? " (accepted)" : " (not accepted)") << '\n';
  }
  return out.str();
}

}  // namespace pktgraph
