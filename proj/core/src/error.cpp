#include "ruelle/error.hpp"

namespace ruelle {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonSquare: return "NonSquare";
    case ErrorCode::NonBinaryEntry: return "NonBinaryEntry";
    case ErrorCode::ZeroRow: return "ZeroRow";
    case ErrorCode::ZeroColumn: return "ZeroColumn";
    case ErrorCode::NotPrimitive: return "NotPrimitive";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InadmissibleWord: return "InadmissibleWord";
    case ErrorCode::WordTooShort: return "WordTooShort";
    case ErrorCode::RangeShrink: return "RangeShrink";
    case ErrorCode::RangeTooLarge: return "RangeTooLarge";
    case ErrorCode::DepthTooSmall: return "DepthTooSmall";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::ShiftMismatch: return "ShiftMismatch";
    case ErrorCode::NotHyperbolic: return "NotHyperbolic";
    case ErrorCode::NotUnimodular: return "NotUnimodular";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::ConeMarginViolated: return "ConeMarginViolated";
    case ErrorCode::NotOnCommonLeaf: return "NotOnCommonLeaf";
    case ErrorCode::CodingMismatch: return "CodingMismatch";
    case ErrorCode::NotExpanding: return "NotExpanding";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::NewtonDivergence: return "NewtonDivergence";
    case ErrorCode::NoRootInRadius: return "NoRootInRadius";
    case ErrorCode::NegativeVariance: return "NegativeVariance";
    case ErrorCode::ZeroMassCylinder: return "ZeroMassCylinder";
  }
  return "Unknown";
}

bool is_numerical(ErrorCode code) {
  switch (code) {
    case ErrorCode::NoConvergence:
    case ErrorCode::NewtonDivergence:
    case ErrorCode::NoRootInRadius:
    case ErrorCode::NegativeVariance:
    case ErrorCode::ZeroMassCylinder:
      return true;
    default:
      return false;
  }
}

}  // namespace ruelle
