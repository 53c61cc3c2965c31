#include "phicurv/errors.hpp"

namespace phicurv {

const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::VariableCountMismatch: return "VariableCountMismatch";
    case ErrorCode::RingMismatch: return "RingMismatch";
    case ErrorCode::ExponentOverflow: return "ExponentOverflow";
    case ErrorCode::NotEndomorphism: return "NotEndomorphism";
    case ErrorCode::NotCertifiedContracting: return "NotCertifiedContracting";
    case ErrorCode::ZeroModule: return "ZeroModule";
    case ErrorCode::NotArtinianCondition: return "NotArtinianCondition";
    case ErrorCode::NotArtinianRing: return "NotArtinianRing";
    case ErrorCode::SizeBudgetExceeded: return "SizeBudgetExceeded";
    case ErrorCode::GeneratorSetInvalid: return "GeneratorSetInvalid";
    case ErrorCode::TableTooShort: return "TableTooShort";
    case ErrorCode::ElementNotInMaximalIdeal: return "ElementNotInMaximalIdeal";
    case ErrorCode::NonHomogeneousIdeal: return "NonHomogeneousIdeal";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::BadInput: return "BadInput";
  }
  return "Unknown";
}

}  // namespace phicurv
