#pragma once

#include <stdexcept>
#include <string>

namespace qkz {

// Failure kinds surfaced by the engine. Tests match on the code; the message
// carries context for humans.
enum class Errc {
  DivisionByZero,
  SubstitutionPole,
  UnsupportedVariable,
  SamplePole,
  AmbiguousLeading,
  NonPolynomialResult,
  NotInSpan,
  DegenerateEigenvalue,
  SolveAmbiguous,
  VerifyFailed,
  SpecializationPole,
  NotAdmissible,
  OddOnly,
  RelationFailed,
  IdentityFailed,
  EquationFailed,
  VanishingFailed,
  KLViolation,
  NoSolution,
  NonUniqueSolution,
  ParseError,
  BadArgument,
};

class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const { return code_; }

private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace qkz
