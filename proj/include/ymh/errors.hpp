#pragma once

#include <stdexcept>
#include <string>

namespace ymh {

enum class ErrorCode {
  BadGrid,
  NonSPDMetric,
  DegreeMismatch,
  TopDegree,
  DegreeOverflow,
  NonCommutingMonodromy,
  HiggsNotFlat,
  HiggsWedgeNonzero,
  NoPrincipalLog,
  RankMismatch,
  NotPositive,
  ZeroVolume,
  NotAstheno,
  NotInvariant,
  NoSpectralGap,
  UnsolvableNormalization,
  ConfigError,
};

const char* error_code_name(ErrorCode code);

/// Domain error carrying a machine-checkable code alongside the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace ymh
