#pragma once

#include <stdexcept>
#include <string>

namespace wnil {

// Failure categories shared across the core and mirrored by the C API.
enum class ErrorCode {
  InvalidArgument = 1,
  EmptyBall,
  DegenerateBall,
  NonFiniteWeight,
  BadPolicy,
  ZeroAverage,
  ZeroMass,
  NoConvergence,
  GridMismatch,
  UncoveredPoint,
  HypothesisFailed,
  NotProper,
  EmptySet,
  EmptySweep,
  ConfigInvalid,
  IOFailure,
  ParseError,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool ok, ErrorCode code, const std::string& what) {
  if (!ok) fail(code, what);
}

}  // namespace wnil
