#include "strip/error.hpp"

namespace strip {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ParamDomain: return "ParamDomain";
    case ErrorKind::InadmissibleMove: return "InadmissibleMove";
    case ErrorKind::DegenerateWeights: return "DegenerateWeights";
    case ErrorKind::TruncationTooSmall: return "TruncationTooSmall";
    case ErrorKind::QuadratureFailure: return "QuadratureFailure";
    case ErrorKind::ShockRegion: return "ShockRegion";
    case ErrorKind::EmptySample: return "EmptySample";
    case ErrorKind::AllZeroWeights: return "AllZeroWeights";
    case ErrorKind::Config: return "Config";
  }
  return "Unknown";
}

}  // namespace strip
