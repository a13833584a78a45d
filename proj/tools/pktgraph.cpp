// pktgraph: command-line front end.
//
// Exit codes: 0 success, 1 other failure, 2 configuration error, 3 resource
// limit, 4 ambiguous ordering, 5 comparison outside tolerance.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pktgraph/asymptotics.hpp"
#include "pktgraph/experiment.hpp"
#include "pktgraph/lattice_count.hpp"
#include "pktgraph/serialization.hpp"

namespace fs = std::filesystem;
using namespace pktgraph;

namespace {

constexpr int kExitOther = 1;
constexpr int kExitConfig = 2;
constexpr int kExitResource = 3;
constexpr int kExitAmbiguous = 4;
constexpr int kExitCompare = 5;

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_real(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(what + ": '" + text + "' is not a number");
  }
}

Code parse_code(const std::string& bits) {
  Code c;
  for (const char ch : bits) {
    if (ch != '0' && ch != '1') throw ConfigError("--code: expected a string of 0 and 1, got '" + bits + "'");
    c.parities.push_back(static_cast<std::uint8_t>(ch - '0'));
  }
  return c;
}

// Streams the event log into `path` through a temporary sibling.
void write_events(const EventLog& log, const fs::path& path) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + tmp.string() + "'");
    write_event_log_jsonl(log, out);
    out.flush();
    if (!out) throw IoError("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot move output into '" + path.string() + "'");
  }
}

struct SimulateArgs {
  std::string graph;
  std::string edge;
  std::string offset = "1/2";
  std::string dir;
  bool both = false;
  double horizon = 0.0;
  std::size_t samples = 200;
  bool log_grid = false;
  std::string out;
  std::vector<std::string> pairs;
  double window = 0.5;
  bool events = false;
  bool amplitude = false;
  std::uint64_t max_records = 100'000'000;
};

int run_simulate(const SimulateArgs& a) {
  ExperimentConfig config;
  config.graph = load_graph_spec(a.graph);
  config.start_edge = a.edge;
  config.offset = a.offset;
  config.direction = a.dir;
  config.both_directions = a.both;
  config.horizon = a.horizon;
  config.grid.count = a.samples;
  config.grid.log_spacing = a.log_grid;
  config.fit_window = a.window;
  config.simulation.track_amplitude = a.amplitude;
  config.simulation.max_records = a.max_records;
  config.keep_log = a.events;
  for (const auto& p : a.pairs) {
    const auto colon = p.find(':');
    if (colon == std::string::npos) throw ConfigError("--pair expects vertex:edge, got '" + p + "'");
    config.departure_pairs.emplace_back(p.substr(0, colon), p.substr(colon + 1));
  }

  const ExperimentResult result = run_experiment(config);
  for (const auto& w : build_graph(config.graph).warnings()) std::cerr << "warning: " << w << '\n';

  // Everything is computed before the first file is written.
  const std::string csv = series_csv(result.series);
  const std::string json = comparison_to_json(result);
  const fs::path prefix = a.out;
  write_text_file(fs::path(prefix.string() + ".csv"), csv);
  write_text_file(fs::path(prefix.string() + ".json"), json);
  if (result.log) write_events(*result.log, fs::path(prefix.string() + ".events.jsonl"));

  std::cout << "regime " << to_string(result.report.regime) << ", " << result.records << " departure records, "
            << result.series.rows.size() << " samples\n";
  if (!result.series.rows.empty()) {
    const auto& last = result.series.rows.back();
    std::cout << "N(" << format_double(last.t) << ") = " << last.total << '\n';
  }
  std::cout << comparison_table(result.comparison);
  return 0;
}

int run_predict(const std::string& graph, const std::string& out) {
  const MetricGraph g = build_graph(load_graph_spec(graph));
  for (const auto& w : g.warnings()) std::cerr << "warning: " << w << '\n';
  const std::string text = report_to_json(predict(g));
  if (out.empty() || out == "-") {
    std::cout << text;
  } else {
    write_text_file(out, text);
  }
  return 0;
}

int run_lattice(const std::string& times_text, double T, const std::string& code_bits, std::uint64_t cap) {
  std::vector<double> times;
  for (const auto& s : split(times_text, ',')) times.push_back(parse_real(s, "--times"));
  if (times.empty()) throw ConfigError("--times: need at least one time");
  for (const double t : times) {
    if (!(t > 0.0)) throw ConfigError("--times: travel times must be positive");
  }
  std::cout << "simplex_count " << simplex_count(times, T, cap) << '\n';
  if (!code_bits.empty()) {
    const Code code = parse_code(code_bits);
    if (code.parities.size() != times.size()) throw ConfigError("--code: needs one bit per time");
    std::cout << "code_count " << code_count(code, times, T, cap) << '\n';
  }
  return 0;
}

int run_compare(const std::string& series_path, const std::string& prediction_path, double tolerance_pct,
                double window) {
  if (!(tolerance_pct >= 0.0)) throw ConfigError("--tolerance must be non-negative");
  const SeriesTable table = parse_series_csv(read_text_file(series_path));
  const PredictionReport report = parse_report_json(read_text_file(prediction_path));
  const CompareOutcome outcome = compare_series(table, report, window);
  std::cout << comparison_table(outcome);
  if (outcome.rows.empty()) {
    std::cout << "no predictions apply to regime " << to_string(report.regime) << '\n';
    return kExitCompare;
  }
  bool ok = true;
  for (const auto& c : outcome.rows) ok = ok && c.rel_error * 100.0 <= tolerance_pct;
  if (outcome.stabilization && !outcome.stabilization->accepted) ok = false;
  std::cout << (ok ? "within" : "OUTSIDE") << " tolerance " << tolerance_pct << "%\n";
  return ok ? 0 : kExitCompare;
}

int run_fit(const std::string& series_path, const std::string& column, int degree, double window) {
  const SeriesTable table = parse_series_csv(read_text_file(series_path));
  const FitResult fit = fit_leading_coefficient(table, column, degree, window);
  std::cout << "estimate " << format_double(fit.estimate) << '\n'
            << "stderr " << format_double(fit.std_error) << '\n'
            << "rows " << fit.rows << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Packet counting on metric graphs: simulate, predict, lattice oracles, compare, fit"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate_cmd = app.add_subcommand("simulate", "Run the packet dynamics and write series CSV and report JSON");
  simulate_cmd->add_option("--graph", sim.graph, "Graph spec JSON")->required();
  simulate_cmd->add_option("--edge", sim.edge, "Start edge id")->required();
  simulate_cmd->add_option("--offset", sim.offset, "Start offset from the edge's first endpoint: p/q (fraction of the edge) or a time expression such as 1/3*t0");
  simulate_cmd->add_option("--dir", sim.dir, "Endpoint vertex the packet heads toward, or forward/backward")->required();
  simulate_cmd->add_flag("--both", sim.both, "Also emit a packet in the opposite direction");
  simulate_cmd->add_option("--horizon", sim.horizon, "Simulation horizon in units of the first basis symbol")->required();
  simulate_cmd->add_option("--samples", sim.samples, "Number of sample instants")->capture_default_str();
  simulate_cmd->add_flag("--log-grid", sim.log_grid, "Log-spaced sample grid");
  simulate_cmd->add_option("--out", sim.out, "Output prefix: writes <prefix>.csv and <prefix>.json")->required();
  simulate_cmd->add_option("--pair", sim.pairs, "Departure column vertex:edge (repeatable; default all incidences)");
  simulate_cmd->add_option("--window", sim.window, "Trailing fit window fraction")->capture_default_str();
  simulate_cmd->add_flag("--events", sim.events, "Also write <prefix>.events.jsonl");
  simulate_cmd->add_flag("--amplitude", sim.amplitude, "Track scattering amplitudes");
  simulate_cmd->add_option("--max-records", sim.max_records, "Departure record cap")->capture_default_str();

  std::string predict_graph;
  std::string predict_out;
  auto* predict_cmd = app.add_subcommand("predict", "Evaluate the closed-form predictors for a graph");
  predict_cmd->add_option("--graph", predict_graph, "Graph spec JSON")->required();
  predict_cmd->add_option("--out", predict_out, "Report JSON path (stdout when omitted)");

  std::string lattice_times;
  double lattice_T = 0.0;
  std::string lattice_code;
  std::uint64_t lattice_cap = kDefaultEnumerationCap;
  auto* lattice_cmd = app.add_subcommand("lattice", "Count lattice points in an expanding simplex");
  lattice_cmd->add_option("--times", lattice_times, "Comma-separated positive travel times")->required();
  lattice_cmd->add_option("--T", lattice_T, "Simplex bound")->required();
  lattice_cmd->add_option("--code", lattice_code, "Parity code, one bit per time");
  lattice_cmd->add_option("--cap", lattice_cap, "Enumeration cap")->capture_default_str();

  std::string compare_series_path;
  std::string compare_prediction;
  double compare_tolerance = 10.0;
  double compare_window = 0.5;
  auto* compare_cmd = app.add_subcommand("compare", "Fit a series and compare it with a prediction report");
  compare_cmd->add_option("--series", compare_series_path, "Series CSV")->required();
  compare_cmd->add_option("--prediction", compare_prediction, "Prediction report JSON")->required();
  compare_cmd->add_option("--tolerance", compare_tolerance, "Relative tolerance in percent")->capture_default_str();
  compare_cmd->add_option("--window", compare_window, "Trailing fit window fraction")->capture_default_str();

  std::string fit_series;
  std::string fit_column = "N";
  int fit_degree = 1;
  double fit_window = 0.5;
  auto* fit_cmd = app.add_subcommand("fit", "Least-squares fit of c * t^degree to a series column");
  fit_cmd->add_option("--series", fit_series, "Series CSV")->required();
  fit_cmd->add_option("--degree", fit_degree, "Power of t")->required();
  fit_cmd->add_option("--window", fit_window, "Trailing window fraction")->capture_default_str();
  fit_cmd->add_option("--column", fit_column, "Column to fit")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*simulate_cmd) return run_simulate(sim);
    if (*predict_cmd) return run_predict(predict_graph, predict_out);
    if (*lattice_cmd) return run_lattice(lattice_times, lattice_T, lattice_code, lattice_cap);
    if (*compare_cmd) return run_compare(compare_series_path, compare_prediction, compare_tolerance, compare_window);
    if (*fit_cmd) return run_fit(fit_series, fit_column, fit_degree, fit_window);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ResourceLimitError& e) {
    std::cerr << "resource limit: " << e.what() << '\n';
    return kExitResource;
  } catch (const AmbiguousOrderingError& e) {
    std::cerr << "ambiguous ordering: " << e.what() << '\n';
    return kExitAmbiguous;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitOther;
  }
  return kExitOther;
}
