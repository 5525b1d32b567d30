#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pairspec {

enum class ErrorCode {
  NonPositiveSigma,
  TauOutOfUnitDisc,
  ComplexTauInRealKind,
  InvalidSplit,
  InvalidDims,
  InvalidArgument,
  EmptyMatrix,
  ShapeMismatch,
  NonSquare,
  NonFinite,
  NoConvergence,
  AlphaOneUnsupported,
  LambdaZero,
  DegenerateWindow,
  EmptyInput,
  InvalidConfig,
  IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers (and the verification report) can branch on the cause.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace pairspec
