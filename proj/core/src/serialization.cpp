#include "pktgraph/serialization.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace pktgraph {

using nlohmann::json;

namespace {

void check_keys(const json& obj, std::initializer_list<std::string_view> allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + ": expected a JSON object");
  for (const auto& [key, _] : obj.items()) {
    bool known = false;
    for (const auto a : allowed) known = known || key == a;
    if (!known) throw ConfigError(where + ": unknown field '" + key + "'");
  }
}

const json& required(const json& obj, const char* key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(where + ": missing field '" + key + "'");
  return *it;
}

std::string as_string(const json& j, const std::string& where) {
  if (!j.is_string()) throw ConfigError(where + ": expected a string");
  return j.get<std::string>();
}

json parse_json(std::string_view text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(what + ": " + e.what());
  }
}

json basis_json(const TimeBasis& basis) {
  json arr = json::array();
  for (const auto& s : basis.symbols()) arr.push_back({{"name", s.name}, {"witness", s.witness}});
  return arr;
}

TimeBasis basis_from(const json& j, const std::string& where) {
  if (!j.is_array()) throw ConfigError(where + ": expected an array");
  std::vector<BasisSymbol> symbols;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string at = where + "[" + std::to_string(i) + "]";
    check_keys(j[i], {"name", "witness"}, at);
    const json& w = required(j[i], "witness", at);
    if (!w.is_number()) throw ConfigError(at + ".witness: expected a number");
    symbols.push_back({as_string(required(j[i], "name", at), at + ".name"), w.get<double>()});
  }
  try {
    return TimeBasis::make(std::move(symbols));
  } catch (const ConfigError& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

json time_json(const EventTime& t) {
  json obj = json::object();
  for (const auto& term : t.terms()) obj[t.basis().symbol(term.symbol).name] = format_rational(term.coeff);
  return obj;
}

EventTime time_from(const json& j, const TimeBasis& basis, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object mapping symbol to \"p/q\"");
  std::vector<EventTime::Term> terms;
  for (const auto& [name, value] : j.items()) {
    const auto index = basis.find(name);
    if (!index) throw ConfigError(where + ": unknown basis symbol '" + name + "'");
    Rational q;
    if (value.is_string()) {
      try {
        q = parse_rational(value.get<std::string>());
      } catch (const ConfigError& e) {
        throw ConfigError(where + "." + name + ": " + e.what());
      }
    } else if (value.is_number_integer()) {
      q = Rational(value.get<std::int64_t>());
    } else {
      throw ConfigError(where + "." + name + ": expected a \"p/q\" string");
    }
    terms.push_back({*index, q});
  }
  return EventTime::from_terms(basis, std::move(terms));
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string basis_to_json(const TimeBasis& basis) { return basis_json(basis).dump(); }

TimeBasis parse_basis_json(std::string_view text) { return basis_from(parse_json(text, "basis"), "basis"); }

std::string event_time_to_json(const EventTime& t) { return time_json(t).dump(); }

EventTime parse_event_time_json(std::string_view text, const TimeBasis& basis) {
  return time_from(parse_json(text, "time"), basis, "time");
}

std::string graph_spec_to_json(const GraphSpec& spec) {
  json j;
  j["basis"] = basis_json(spec.basis);
  j["vertices"] = spec.vertices;
  json edges = json::array();
  for (const auto& e : spec.edges) {
    edges.push_back({{"id", e.id}, {"from", e.from}, {"to", e.to}, {"time", time_json(e.time)}});
  }
  j["edges"] = std::move(edges);
  return j.dump(2);
}

GraphSpec parse_graph_spec(std::string_view text) {
  const json j = parse_json(text, "graph spec");
  check_keys(j, {"basis", "vertices", "edges"}, "graph spec");
  GraphSpec spec;
  spec.basis = basis_from(required(j, "basis", "graph spec"), "basis");

  const json& vertices = required(j, "vertices", "graph spec");
  if (!vertices.is_array()) throw ConfigError("vertices: expected an array");
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    spec.vertices.push_back(as_string(vertices[i], "vertices[" + std::to_string(i) + "]"));
  }

  const json& edges = required(j, "edges", "graph spec");
  if (!edges.is_array()) throw ConfigError("edges: expected an array");
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const std::string at = "edges[" + std::to_string(i) + "]";
    check_keys(edges[i], {"id", "from", "to", "time"}, at);
    EdgeSpec e;
    e.id = as_string(required(edges[i], "id", at), at + ".id");
    e.from = as_string(required(edges[i], "from", at), at + ".from");
    e.to = as_string(required(edges[i], "to", at), at + ".to");
    e.time = time_from(required(edges[i], "time", at), spec.basis, at + ".time");
    spec.edges.push_back(std::move(e));
  }
  return spec;
}

GraphSpec load_graph_spec(const std::filesystem::path& path) {
  try {
    return parse_graph_spec(read_text_file(path));
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string report_to_json(const PredictionReport& r) {
  json j;
  j["regime"] = to_string(r.regime);
  j["V"] = r.vertices;
  j["E"] = r.edges;
  j["beta"] = r.beta;
  j["sum_times"] = r.sum_times;
  j["prod_times"] = r.prod_times;
  j["uniform_density"] = r.uniform_density;
  j["C"] = optional_number(r.C);
  j["R"] = optional_number(r.R);
  j["arrival_leading"] = optional_number(r.arrival_leading);
  j["rank1_limit"] = r.rank1_limit ? json(*r.rank1_limit) : json(nullptr);
  j["rank2_slope"] = optional_number(r.rank2_slope);
  json edges = json::array();
  for (std::size_t i = 0; i < r.edge_ids.size(); ++i) {
    edges.push_back({{"id", r.edge_ids[i]}, {"time", r.edge_times[i]}});
  }
  j["edges"] = std::move(edges);
  return j.dump(2) + "\n";
}

PredictionReport parse_report_json(std::string_view text) {
  const json j = parse_json(text, "prediction report");
  check_keys(j, {"regime", "V", "E", "beta", "sum_times", "prod_times", "uniform_density", "C", "R",
                 "arrival_leading", "rank1_limit", "rank2_slope", "edges"},
             "prediction report");
  PredictionReport r;
  try {
    r.regime = parse_regime(j.at("regime").get<std::string>());
    r.vertices = j.at("V").get<std::size_t>();
    r.edges = j.at("E").get<std::size_t>();
    r.beta = j.at("beta").get<std::size_t>();
    r.sum_times = j.at("sum_times").get<double>();
    r.prod_times = j.at("prod_times").get<double>();
    r.uniform_density = j.at("uniform_density").get<double>();
    auto opt = [&](const char* key) -> std::optional<double> {
      const json& v = j.at(key);
      return v.is_null() ? std::nullopt : std::optional<double>(v.get<double>());
    };
    r.C = opt("C");
    r.R = opt("R");
    r.arrival_leading = opt("arrival_leading");
    r.rank2_slope = opt("rank2_slope");
    if (!j.at("rank1_limit").is_null()) r.rank1_limit = j.at("rank1_limit").get<std::int64_t>();
    for (const auto& e : j.at("edges")) {
      check_keys(e, {"id", "time"}, "prediction report edges");
      r.edge_ids.push_back(e.at("id").get<std::string>());
      r.edge_times.push_back(e.at("time").get<double>());
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("prediction report: ") + e.what());
  }
  return r;
}

void write_event_log_jsonl(const EventLog& log, std::ostream& out) {
  const MetricGraph& g = log.graph();
  for (std::size_t i = 0; i < log.size(); ++i) {
    const EventLog::Record rec = log.record(i);
    json j;
    j["t_real"] = log.time_real(i);
    j["t_exact"] = time_json(rec.time);
    j["vertex"] = rec.vertex ? json(g.vertex_name(*rec.vertex)) : json(nullptr);
    j["edge"] = g.edge(rec.edge.edge).id;
    j["dir"] = rec.edge.dir == Direction::Forward ? "forward" : "backward";
    if (rec.amplitude) j["amp"] = *rec.amplitude;
    out << j.dump() << '\n';
  }
}

void write_series_csv(const CountSeries& series, std::ostream& out) {
  out << "t,N";
  for (const auto& id : series.edge_ids) out << ",N_e_" << id;
  for (const auto& [v, e] : series.pairs) out << ",N_dep_" << v << "_" << e;
  out << '\n';
  for (const auto& row : series.rows) {
    out << format_double(row.t) << ',' << row.total;
    for (const auto c : row.per_edge) out << ',' << c;
    for (const auto c : row.departures) out << ',' << c;
    out << '\n';
  }
}

std::string series_csv(const CountSeries& series) {
  std::ostringstream out;
  write_series_csv(series, out);
  return out.str();
}

std::size_t SeriesTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return i;
  }
  throw ConfigError("series has no column '" + std::string(name) + "'");
}

std::vector<double> SeriesTable::values(std::size_t col) const {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r.at(col));
  return out;
}

SeriesTable parse_series_csv(std::string_view text) {
  SeriesTable table;
  std::istringstream in{std::string(text)};
  std::string line;
  auto split = [](const std::string& s) {
    std::vector<std::string> cells;
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!s.empty() && s.back() == ',') cells.emplace_back();
    return cells;
  };
  if (!std::getline(in, line)) throw ConfigError("series CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  table.columns = split(line);
  if (table.columns.size() < 2 || table.columns[0] != "t" || table.columns[1] != "N") {
    throw ConfigError("series CSV header must start with t,N");
  }
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != table.columns.size()) {
      throw ConfigError("series CSV line " + std::to_string(lineno) + ": expected " +
                        std::to_string(table.columns.size()) + " cells");
    }
    std::vector<double> row;
    for (const auto& c : cells) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(c, &used));
        if (used != c.size()) throw std::invalid_argument(c);
      } catch (const std::exception&) {
        throw ConfigError("series CSV line " + std::to_string(lineno) + ": malformed number '" + c + "'");
      }
    }
    table.rows.push_back(std::move(row));
  }
  for (std::size_t i = 1; i < table.rows.size(); ++i) {
    if (table.rows[i][0] < table.rows[i - 1][0]) throw ConfigError("series CSV rows are not sorted by t");
  }
  return table;
}

SeriesTable to_table(const CountSeries& series) { return parse_series_csv(series_csv(series)); }

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + tmp.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot move output into '" + path.string() + "'");
  }
}

}  // namespace pktgraph
