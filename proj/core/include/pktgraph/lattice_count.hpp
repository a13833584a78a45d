#pragma once

// Brute-force lattice oracles. Everything here is plain bounded enumeration
// so it can serve as ground truth for the simulator and the asymptotic
// formulas; caps turn runaway enumerations into ResourceLimitError.

#include <cstdint>
#include <span>
#include <vector>

#include "pktgraph/metric_graph.hpp"
#include "pktgraph/time_algebra.hpp"

namespace pktgraph {

inline constexpr std::uint64_t kDefaultEnumerationCap = 100'000'000;
// Raw-real time lists treat two values this close as the same instant.
inline constexpr double kRealDuplicateTolerance = 1e-9;

// Nonnegative integer tuples n with sum n_i * t_i <= T.
std::uint64_t simplex_count(std::span<const double> times, double T,
                            std::uint64_t cap = kDefaultEnumerationCap);
std::uint64_t simplex_count(std::span<const EventTime> times, const EventTime& T,
                            std::uint64_t cap = kDefaultEnumerationCap);

// Tuples n >= 0 with sum t_i * (c_i + 2 n_i) <= T for a parity vector c.
std::uint64_t code_count(const Code& code, std::span<const double> times, double T,
                         std::uint64_t cap = kDefaultEnumerationCap);
std::uint64_t code_count(const Code& code, std::span<const EventTime> times, const EventTime& T,
                         std::uint64_t cap = kDefaultEnumerationCap);

// Distinct instants sum t_i * (c_i + 2 n_i) <= T, sorted. Throws ConfigError
// when two different tuples land within kRealDuplicateTolerance.
std::vector<double> code_times(const Code& code, std::span<const double> times, double T,
                               std::uint64_t cap = kDefaultEnumerationCap);

// Union over codes(g, from, to) of the code-associated instants up to T.
// Exact variant dedupes by vector equality and throws ConfigError if two
// different codes produce the same instant (the declared independence is
// then false).
std::vector<EventTime> arrival_times_exact(const MetricGraph& g, VertexIndex from, VertexIndex to,
                                           const EventTime& T, std::uint64_t cap = kDefaultEnumerationCap);
std::vector<double> arrival_times_brute(const MetricGraph& g, VertexIndex from, VertexIndex to, double T,
                                        std::uint64_t cap = kDefaultEnumerationCap);

// N = alpha * n + beta * m with alpha, beta >= 1.
bool representable(std::int64_t N, std::int64_t n, std::int64_t m);
// Least M such that every N > M is representable.
std::int64_t frobenius_bound(std::int64_t n, std::int64_t m);

}  // namespace pktgraph
