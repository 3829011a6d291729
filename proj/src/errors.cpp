#include "ymh/errors.hpp"

namespace ymh {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::BadGrid: return "BadGrid";
    case ErrorCode::NonSPDMetric: return "NonSPDMetric";
    case ErrorCode::DegreeMismatch: return "DegreeMismatch";
    case ErrorCode::TopDegree: return "TopDegree";
    case ErrorCode::DegreeOverflow: return "DegreeOverflow";
    case ErrorCode::NonCommutingMonodromy: return "NonCommutingMonodromy";
    case ErrorCode::HiggsNotFlat: return "HiggsNotFlat";
    case ErrorCode::HiggsWedgeNonzero: return "HiggsWedgeNonzero";
    case ErrorCode::NoPrincipalLog: return "NoPrincipalLog";
    case ErrorCode::RankMismatch: return "RankMismatch";
    case ErrorCode::NotPositive: return "NotPositive";
    case ErrorCode::ZeroVolume: return "ZeroVolume";
    case ErrorCode::NotAstheno: return "NotAstheno";
    case ErrorCode::NotInvariant: return "NotInvariant";
    case ErrorCode::NoSpectralGap: return "NoSpectralGap";
    case ErrorCode::UnsolvableNormalization: return "UnsolvableNormalization";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "UnknownError";
}

}  // namespace ymh
