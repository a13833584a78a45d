#pragma once

#include <stdexcept>
#include <string>

namespace pktgraph {

// Root of every error the library throws. Subclasses map onto distinct CLI
// exit codes (see tools/pktgraph.cpp).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input: duplicate names, unknown vertices,
// disconnected graphs, mismatched bases, unsorted samples.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Two distinct exact times whose witness values are closer than epsilon.
class AmbiguousOrderingError : public Error {
 public:
  using Error::Error;
};

// Enumeration or record caps exceeded.
class ResourceLimitError : public Error {
 public:
  using Error::Error;
};

class TurningPointError : public Error {
 public:
  using Error::Error;
};

// A predictor was asked about a graph or time system outside its hypotheses.
class RegimeError : public Error {
 public:
  using Error::Error;
};

// Count query outside the reliable part of an event log, or naming an
// unknown edge or vertex.
class QueryError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace pktgraph
