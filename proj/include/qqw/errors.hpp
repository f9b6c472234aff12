#pragma once

#include <stdexcept>
#include <string>

namespace qqw {

/// Machine-readable error codes. Every library error surfaces as one of
/// these so the CLI can emit a stable report code.
enum class Errc {
  NotPrime,
  QIsTrivial,
  ZeroInput,
  OutOfRange,
  TruncationOverflow,
  NotBimoduleCompatible,
  GammaConstraintViolated,
  SigmaConstraintViolated,
  NotFiltered,
  WrongOrderOfQ,
  OracleMismatch,
  SigmaFourViolated,
  GammaEFConditionViolated,
  EigenvaluesNotInField,
  TauUnsolvable,
  ScalarConstraintViolated,
  GlueMismatch,
  CaseUnsupported,
  NotTransitive,
  MixedGamma,
  ConfigError,
  FieldMismatch,
  SingularMatrix,
  Internal,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& msg)
      : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}
  Errc code() const { return code_; }
  const char* code_name() const { return errc_name(code_); }

private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& msg) { throw Error(code, msg); }

inline void check(bool ok, Errc code, const std::string& msg) {
  if (!ok) fail(code, msg);
}

}  // namespace qqw
