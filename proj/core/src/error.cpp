#include "pairspec/error.hpp"

namespace pairspec {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NonPositiveSigma: return "NonPositiveSigma";
    case ErrorCode::TauOutOfUnitDisc: return "TauOutOfUnitDisc";
    case ErrorCode::ComplexTauInRealKind: return "ComplexTauInRealKind";
    case ErrorCode::InvalidSplit: return "InvalidSplit";
    case ErrorCode::InvalidDims: return "InvalidDims";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::EmptyMatrix: return "EmptyMatrix";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::NonSquare: return "NonSquare";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::AlphaOneUnsupported: return "AlphaOneUnsupported";
    case ErrorCode::LambdaZero: return "LambdaZero";
    case ErrorCode::DegenerateWindow: return "DegenerateWindow";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace pairspec
