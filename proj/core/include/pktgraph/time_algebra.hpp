#pragma once

// Exact event times: rational combinations of named basis times that the
// caller declares linearly independent over Q. Each basis symbol carries a
// positive "witness" value used only for ordering and reporting.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "pktgraph/error.hpp"

namespace pktgraph {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Accepts "p", "-p", "p/q". Throws ConfigError on anything else or q == 0.
Rational parse_rational(std::string_view text);
// Lowest terms, "p" when the denominator is one, "p/q" otherwise.
std::string format_rational(const Rational& q);

inline constexpr double kDefaultEpsilon = 1e-9;

struct BasisSymbol {
  std::string name;
  double witness = 0.0;
};

class TimeBasis {
 public:
  // Rank-zero basis; only the zero time lives over it.
  TimeBasis();

  // Validates unique names and strictly positive finite witnesses.
  static TimeBasis make(std::vector<BasisSymbol> symbols);

  std::size_t rank() const { return symbols_->size(); }
  const BasisSymbol& symbol(std::size_t i) const { return (*symbols_)[i]; }
  const std::vector<BasisSymbol>& symbols() const { return *symbols_; }
  std::optional<std::size_t> find(std::string_view name) const;

  friend bool operator==(const TimeBasis& a, const TimeBasis& b);

 private:
  explicit TimeBasis(std::shared_ptr<const std::vector<BasisSymbol>> symbols);

  std::shared_ptr<const std::vector<BasisSymbol>> symbols_;
};

// Canonical form: terms sorted by symbol index, no zero coefficients.
// A default-constructed EventTime is the zero time and is compatible with
// every basis.
class EventTime {
 public:
  struct Term {
    std::size_t symbol = 0;
    Rational coeff;
    friend bool operator==(const Term&, const Term&) = default;
  };

  EventTime() = default;
  explicit EventTime(TimeBasis basis) : basis_(std::move(basis)) {}

  static EventTime symbol(TimeBasis basis, std::size_t index, const Rational& coeff = 1);
  // Terms may be unsorted and repeat symbols; they are summed and canonicalized.
  static EventTime from_terms(TimeBasis basis, std::vector<Term> terms);

  const TimeBasis& basis() const { return basis_; }
  const std::vector<Term>& terms() const { return terms_; }
  Rational coefficient(std::size_t symbol) const;
  bool is_zero() const { return terms_.empty(); }

  EventTime& operator+=(const EventTime& other);
  EventTime& operator-=(const EventTime& other);
  EventTime operator-() const;
  friend EventTime operator+(EventTime a, const EventTime& b) { return a += b; }
  friend EventTime operator-(EventTime a, const EventTime& b) { return a -= b; }

  // Exact mapping equality.
  friend bool operator==(const EventTime& a, const EventTime& b);

 private:
  void combine(const EventTime& other, int sign);

  TimeBasis basis_;
  std::vector<Term> terms_;
};

enum class Ordering { Less, Equal, Greater };

TimeBasis make_basis(std::vector<BasisSymbol> specs);

EventTime add(const EventTime& a, const EventTime& b);
EventTime scale(const EventTime& a, const Rational& q);

// Equal iff the canonical mappings agree; otherwise the sign of the witness
// value of a - b. Throws AmbiguousOrderingError when the mappings differ but
// the witness difference is within epsilon.
Ordering compare(const EventTime& a, const EventTime& b, double epsilon = kDefaultEpsilon);

double to_real(const EventTime& a);

// Rank over Q of the coefficient vectors, by exact Gaussian elimination.
std::size_t rational_rank(std::span<const EventTime> times);

// Human-readable form such as "3*b1 + 1/3*b2"; "0" for the zero time.
std::string to_string(const EventTime& a);

// Parses sums of terms "q*sym", "q", "sym" joined by + or -. A bare rational
// without a symbol is only accepted when `unit` is given, in which case it is
// a multiple of `unit`.
EventTime parse_event_time(std::string_view text, const TimeBasis& basis,
                           const EventTime* unit = nullptr);

// Fixed-denominator integer view of a family of event times. Every time that
// the frame encodes is stored as an int64 numerator per basis symbol over a
// single shared denominator, which is what the simulator and the lattice
// oracles iterate on. Encoding fails loudly if a coefficient does not fit.
class IntegerFrame {
 public:
  IntegerFrame() = default;
  IntegerFrame(TimeBasis basis, std::span<const EventTime> generators);

  const TimeBasis& basis() const { return basis_; }
  std::size_t rank() const { return basis_.rank(); }
  const BigInt& denominator() const { return denominator_; }

  void encode(const EventTime& t, std::span<std::int64_t> out) const;
  std::vector<std::int64_t> encode(const EventTime& t) const;
  EventTime decode(std::span<const std::int64_t> coeffs) const;
  double evaluate(std::span<const std::int64_t> coeffs) const;

 private:
  TimeBasis basis_;
  BigInt denominator_{1};
  std::vector<double> scaled_witness_;
};

}  // namespace pktgraph
