#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ruelle {

enum class ErrorCode {
  // input / validation
  NonSquare,
  NonBinaryEntry,
  ZeroRow,
  ZeroColumn,
  NotPrimitive,
  ParseError,
  InvalidArgument,
  InadmissibleWord,
  WordTooShort,
  RangeShrink,
  RangeTooLarge,
  DepthTooSmall,
  BudgetExceeded,
  DimensionTooLarge,
  Overflow,
  ShiftMismatch,
  NotHyperbolic,
  NotUnimodular,
  DomainError,
  ConeMarginViolated,
  NotOnCommonLeaf,
  CodingMismatch,
  NotExpanding,
  // numerical
  NoConvergence,
  NewtonDivergence,
  NoRootInRadius,
  NegativeVariance,
  ZeroMassCylinder,
};

std::string_view to_string(ErrorCode code);

/// True for failures of an iterative method rather than of the input.
bool is_numerical(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ruelle
