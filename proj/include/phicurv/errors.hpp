#pragma once

#include <stdexcept>
#include <string>

namespace phicurv {

// Stable error codes; the CLI maps these to its error output verbatim.
enum class ErrorCode {
  VariableCountMismatch,
  RingMismatch,
  ExponentOverflow,
  NotEndomorphism,
  NotCertifiedContracting,
  ZeroModule,
  NotArtinianCondition,
  NotArtinianRing,
  SizeBudgetExceeded,
  GeneratorSetInvalid,
  TableTooShort,
  ElementNotInMaximalIdeal,
  NonHomogeneousIdeal,
  ParseError,
  BadInput,
};

const char* error_code_name(ErrorCode c);

class EngineError : public std::runtime_error {
 public:
  EngineError(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw EngineError(code, what);
}

}  // namespace phicurv
