#include "pktgraph/time_algebra.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

namespace pktgraph {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

BigInt parse_integer(std::string_view s, std::string_view whole) {
  s = trim(s);
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
    throw ConfigError("malformed rational '" + std::string(whole) + "'");
  }
  BigInt v{std::string(s)};
  return negative ? BigInt(-v) : v;
}

const TimeBasis& unify(const TimeBasis& a, const TimeBasis& b) {
  if (b.rank() == 0) return a;
  if (a.rank() == 0) return b;
  if (!(a == b)) throw ConfigError("event times over mismatched bases");
  return a;
}

bool is_identifier(std::string_view s) {
  if (s.empty() || std::isdigit(static_cast<unsigned char>(s.front()))) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
  });
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_integer(text, text));
  BigInt num = parse_integer(text.substr(0, slash), text);
  BigInt den = parse_integer(text.substr(slash + 1), text);
  if (den == 0) throw ConfigError("zero denominator in '" + std::string(text) + "'");
  return Rational(num, den);
}

std::string format_rational(const Rational& q) {
  const BigInt& den = boost::multiprecision::denominator(q);
  if (den == 1) return boost::multiprecision::numerator(q).str();
  return boost::multiprecision::numerator(q).str() + "/" + den.str();
}

// ---------------------------------------------------------------------------
// TimeBasis

TimeBasis::TimeBasis() {
  static const auto empty = std::make_shared<const std::vector<BasisSymbol>>();
  symbols_ = empty;
}

TimeBasis::TimeBasis(std::shared_ptr<const std::vector<BasisSymbol>> symbols)
    : symbols_(std::move(symbols)) {}

TimeBasis TimeBasis::make(std::vector<BasisSymbol> symbols) {
  std::set<std::string> seen;
  for (const auto& s : symbols) {
    if (!is_identifier(s.name)) throw ConfigError("invalid basis symbol name '" + s.name + "'");
    if (!seen.insert(s.name).second) throw ConfigError("duplicate basis symbol '" + s.name + "'");
    if (!std::isfinite(s.witness) || s.witness <= 0.0) {
      throw ConfigError("basis symbol '" + s.name + "' needs a positive finite witness");
    }
  }
  return TimeBasis(std::make_shared<const std::vector<BasisSymbol>>(std::move(symbols)));
}

std::optional<std::size_t> TimeBasis::find(std::string_view name) const {
  for (std::size_t i = 0; i < symbols_->size(); ++i) {
    if ((*symbols_)[i].name == name) return i;
  }
  return std::nullopt;
}

bool operator==(const TimeBasis& a, const TimeBasis& b) {
  if (a.symbols_ == b.symbols_) return true;
  if (a.rank() != b.rank()) return false;
  for (std::size_t i = 0; i < a.rank(); ++i) {
    if (a.symbol(i).name != b.symbol(i).name || a.symbol(i).witness != b.symbol(i).witness) return false;
  }
  return true;
}

TimeBasis make_basis(std::vector<BasisSymbol> specs) { return TimeBasis::make(std::move(specs)); }

// ---------------------------------------------------------------------------
// EventTime

EventTime EventTime::symbol(TimeBasis basis, std::size_t index, const Rational& coeff) {
  if (index >= basis.rank()) throw ConfigError("basis symbol index out of range");
  EventTime t(std::move(basis));
  if (coeff != 0) t.terms_.push_back({index, coeff});
  return t;
}

EventTime EventTime::from_terms(TimeBasis basis, std::vector<Term> terms) {
  for (const auto& term : terms) {
    if (term.symbol >= basis.rank()) throw ConfigError("basis symbol index out of range");
  }
  std::sort(terms.begin(), terms.end(), [](const Term& x, const Term& y) { return x.symbol < y.symbol; });
  EventTime t(std::move(basis));
  for (auto& term : terms) {
    if (!t.terms_.empty() && t.terms_.back().symbol == term.symbol) {
      t.terms_.back().coeff += term.coeff;
    } else {
      t.terms_.push_back(std::move(term));
    }
  }
  std::erase_if(t.terms_, [](const Term& x) { return x.coeff == 0; });
  return t;
}

Rational EventTime::coefficient(std::size_t symbol) const {
  for (const auto& term : terms_) {
    if (term.symbol == symbol) return term.coeff;
  }
  return Rational(0);
}

void EventTime::combine(const EventTime& other, int sign) {
  basis_ = unify(basis_, other.basis_);
  std::vector<Term> merged;
  merged.reserve(terms_.size() + other.terms_.size());
  auto i = terms_.begin();
  auto j = other.terms_.begin();
  while (i != terms_.end() || j != other.terms_.end()) {
    if (j == other.terms_.end() || (i != terms_.end() && i->symbol < j->symbol)) {
      merged.push_back(std::move(*i++));
    } else if (i == terms_.end() || j->symbol < i->symbol) {
      merged.push_back({j->symbol, sign > 0 ? j->coeff : Rational(-j->coeff)});
      ++j;
    } else {
      Rational c = sign > 0 ? Rational(i->coeff + j->coeff) : Rational(i->coeff - j->coeff);
      if (c != 0) merged.push_back({i->symbol, std::move(c)});
      ++i;
      ++j;
    }
  }
  terms_ = std::move(merged);
}

EventTime& EventTime::operator+=(const EventTime& other) {
  combine(other, +1);
  return *this;
}

EventTime& EventTime::operator-=(const EventTime& other) {
  combine(other, -1);
  return *this;
}

EventTime EventTime::operator-() const {
  EventTime t = *this;
  for (auto& term : t.terms_) term.coeff = -term.coeff;
  return t;
}

bool operator==(const EventTime& a, const EventTime& b) {
  if (a.terms_ != b.terms_) return false;
  return a.basis_.rank() == 0 || b.basis_.rank() == 0 || a.basis_ == b.basis_;
}

EventTime add(const EventTime& a, const EventTime& b) { return a + b; }

EventTime scale(const EventTime& a, const Rational& q) {
  if (q == 0) return EventTime(a.basis());
  std::vector<EventTime::Term> terms = a.terms();
  for (auto& term : terms) term.coeff *= q;
  return EventTime::from_terms(a.basis(), std::move(terms));
}

double to_real(const EventTime& a) {
  double sum = 0.0;
  for (const auto& term : a.terms()) {
    sum += static_cast<double>(term.coeff) * a.basis().symbol(term.symbol).witness;
  }
  return sum;
}

Ordering compare(const EventTime& a, const EventTime& b, double epsilon) {
  if (!(epsilon > 0.0)) throw ConfigError("ordering epsilon must be positive");
  const EventTime diff = a - b;
  if (diff.is_zero()) return Ordering::Equal;
  const double value = to_real(diff);
  if (std::abs(value) <= epsilon) {
    std::ostringstream msg;
    msg << "ambiguous ordering: " << to_string(a) << " vs " << to_string(b) << " differ by "
        << value << " (epsilon " << epsilon << ")";
    throw AmbiguousOrderingError(msg.str());
  }
  return value < 0.0 ? Ordering::Less : Ordering::Greater;
}

std::size_t rational_rank(std::span<const EventTime> times) {
  if (times.empty()) return 0;
  TimeBasis basis;
  for (const auto& t : times) basis = unify(basis, t.basis());
  const std::size_t cols = basis.rank();
  std::vector<std::vector<Rational>> rows;
  rows.reserve(times.size());
  for (const auto& t : times) {
    std::vector<Rational> row(cols);
    for (const auto& term : t.terms()) row[term.symbol] = term.coeff;
    rows.push_back(std::move(row));
  }
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols && rank < rows.size(); ++col) {
    std::size_t pivot = rank;
    while (pivot < rows.size() && rows[pivot][col] == 0) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[pivot], rows[rank]);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == rank || rows[r][col] == 0) continue;
      const Rational factor = rows[r][col] / rows[rank][col];
      for (std::size_t c = col; c < cols; ++c) rows[r][c] -= factor * rows[rank][c];
    }
    ++rank;
  }
  return rank;
}

std::string to_string(const EventTime& a) {
  if (a.is_zero()) return "0";
  std::string out;
  for (const auto& term : a.terms()) {
    Rational c = term.coeff;
    if (!out.empty()) {
      out += c < 0 ? " - " : " + ";
      if (c < 0) c = -c;
    }
    if (c != 1) out += format_rational(c) + "*";
    out += a.basis().symbol(term.symbol).name;
  }
  return out;
}

EventTime parse_event_time(std::string_view text, const TimeBasis& basis, const EventTime* unit) {
  const std::string whole(text);
  EventTime result(basis);
  std::size_t pos = 0;
  text = trim(text);
  if (text.empty()) throw ConfigError("empty time expression");
  while (pos < text.size()) {
    int sign = +1;
    while (pos < text.size() && (text[pos] == '+' || text[pos] == '-' || std::isspace(static_cast<unsigned char>(text[pos])))) {
      if (text[pos] == '-') sign = -sign;
      ++pos;
    }
    std::size_t end = pos;
    while (end < text.size() && text[end] != '+' && text[end] != '-') ++end;
    const std::string_view token = trim(text.substr(pos, end - pos));
    if (token.empty()) throw ConfigError("malformed time expression '" + whole + "'");
    pos = end;

    Rational coeff = sign;
    std::string_view sym;
    if (const auto star = token.find('*'); star != std::string_view::npos) {
      coeff *= parse_rational(token.substr(0, star));
      sym = trim(token.substr(star + 1));
    } else if (is_identifier(token)) {
      sym = token;
    } else {
      coeff *= parse_rational(token);
    }

    if (sym.empty()) {
      if (unit == nullptr) {
        throw ConfigError("time term '" + std::string(token) + "' names no basis symbol");
      }
      result += scale(*unit, coeff);
    } else {
      const auto index = basis.find(sym);
      if (!index) throw ConfigError("unknown basis symbol '" + std::string(sym) + "'");
      result += EventTime::symbol(basis, *index, coeff);
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// IntegerFrame

IntegerFrame::IntegerFrame(TimeBasis basis, std::span<const EventTime> generators)
    : basis_(std::move(basis)) {
  for (const auto& g : generators) {
    unify(basis_, g.basis());
    for (const auto& term : g.terms()) {
      denominator_ = boost::multiprecision::lcm(denominator_, boost::multiprecision::denominator(term.coeff));
    }
  }
  const double den = static_cast<double>(denominator_);
  scaled_witness_.reserve(basis_.rank());
  for (const auto& s : basis_.symbols()) scaled_witness_.push_back(s.witness / den);
}

void IntegerFrame::encode(const EventTime& t, std::span<std::int64_t> out) const {
  unify(basis_, t.basis());
  if (out.size() != rank()) throw ConfigError("integer frame rank mismatch");
  std::fill(out.begin(), out.end(), 0);
  for (const auto& term : t.terms()) {
    const Rational scaled = term.coeff * denominator_;
    if (boost::multiprecision::denominator(scaled) != 1) {
      throw ConfigError("time " + to_string(t) + " is not representable in the integer frame");
    }
    const BigInt& num = boost::multiprecision::numerator(scaled);
    if (num > std::numeric_limits<std::int64_t>::max() || num < std::numeric_limits<std::int64_t>::min()) {
      throw ResourceLimitError("time coefficient exceeds the 64-bit integer frame");
    }
    out[term.symbol] = static_cast<std::int64_t>(num);
  }
}

std::vector<std::int64_t> IntegerFrame::encode(const EventTime& t) const {
  std::vector<std::int64_t> out(rank());
  encode(t, out);
  return out;
}

EventTime IntegerFrame::decode(std::span<const std::int64_t> coeffs) const {
  std::vector<EventTime::Term> terms;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    if (coeffs[k] != 0) terms.push_back({k, Rational(BigInt(coeffs[k]), denominator_)});
  }
  return EventTime::from_terms(basis_, std::move(terms));
}

double IntegerFrame::evaluate(std::span<const std::int64_t> coeffs) const {
  double sum = 0.0;
  for (std::size_t k = 0; k < coeffs.size(); ++k) sum += static_cast<double>(coeffs[k]) * scaled_witness_[k];
  return sum;
}

}  // namespace pktgraph
