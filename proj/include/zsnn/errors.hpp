#pragma once

#include <stdexcept>
#include <string>

namespace zsnn {

// Error taxonomy used across the library. Recoverable verdicts (an invalid
// plan, an unsolvable search) are returned as values, not thrown.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Tensor/layer dimension disagreement.
struct ShapeError : Error {
  using Error::Error;
};

// Bad argument value (tau <= 0, theta outside (0,1), ...).
struct ParamError : Error {
  using Error::Error;
};

// Operation called outside its valid lifecycle (missing forward cache, ...).
struct StateError : Error {
  using Error::Error;
};

// Configured cap exceeded (state-space enumeration, PDDL bound, ...).
struct ResourceError : Error {
  using Error::Error;
};

// File system / format problems.
struct IoError : Error {
  using Error::Error;
};

// Persistence corruption (CRC mismatch, truncation).
struct IntegrityError : Error {
  using Error::Error;
};

// Training diverged; carries the epoch where the loss became non-finite.
struct TrainError : Error {
  int epoch;
  TrainError(const std::string& msg, int epoch_) : Error(msg), epoch(epoch_) {}
};

// A documented precondition was violated by the caller.
struct ContractError : Error {
  using Error::Error;
};

}  // namespace zsnn
