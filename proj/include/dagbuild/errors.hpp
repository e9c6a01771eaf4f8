#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace dagbuild {

// Base class for every error thrown by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SelfLoopError : Error {
  int node;
  explicit SelfLoopError(int i)
      : Error("self loop at node " + std::to_string(i)), node(i) {}
};

struct CycleError : Error {
  std::vector<int> witness;  // nodes that could not be topologically placed
  explicit CycleError(std::vector<int> w)
      : Error("cycle detected among " + std::to_string(w.size()) + " node(s)"),
        witness(std::move(w)) {}
};

struct IndexError : Error {
  using Error::Error;
};

struct InvalidParameterError : Error {
  using Error::Error;
};

struct NoEdgesError : Error {
  using Error::Error;
};

struct NotPositiveDefiniteError : Error {
  using Error::Error;
};

struct TooFewSamplesError : Error {
  using Error::Error;
};

struct SingularCovarianceError : Error {
  using Error::Error;
};

struct EmptySelectionError : Error {
  using Error::Error;
};

struct DimensionMismatchError : Error {
  using Error::Error;
};

struct ZeroTruthError : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

}  // namespace dagbuild
