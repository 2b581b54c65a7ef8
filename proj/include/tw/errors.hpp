#pragma once

#include <stdexcept>
#include <string>

namespace tw {

enum class Err {
  BudgetExceeded,
  SingularEvaluation,
  OverlappingKeepSet,
  ZeroMass,
  WindowTooLarge,
  UndeterminedAtBoundary,
  MixedGrids,
  AtomOnCut,
  DivergentTail,
  PreconditionViolated,
  NotAdmissible,
  NonAtomic,
  SupportsOverlap,
  ZeroDenominator,
  SeparationTooSmall,
  PointOnSupport,
  BracketingFailed,
  DepthTooLarge,
  AtomOnEndpoint,
  ConfigInvalid,
  InvariantViolation,
  Internal,
};

inline const char* err_name(Err e) {
  switch (e) {
    case Err::BudgetExceeded: return "BudgetExceeded";
    case Err::SingularEvaluation: return "SingularEvaluation";
    case Err::OverlappingKeepSet: return "OverlappingKeepSet";
    case Err::ZeroMass: return "ZeroMass";
    case Err::WindowTooLarge: return "WindowTooLarge";
    case Err::UndeterminedAtBoundary: return "UndeterminedAtBoundary";
    case Err::MixedGrids: return "MixedGrids";
    case Err::AtomOnCut: return "AtomOnCut";
    case Err::DivergentTail: return "DivergentTail";
    case Err::PreconditionViolated: return "PreconditionViolated";
    case Err::NotAdmissible: return "NotAdmissible";
    case Err::NonAtomic: return "NonAtomic";
    case Err::SupportsOverlap: return "SupportsOverlap";
    case Err::ZeroDenominator: return "ZeroDenominator";
    case Err::SeparationTooSmall: return "SeparationTooSmall";
    case Err::PointOnSupport: return "PointOnSupport";
    case Err::BracketingFailed: return "BracketingFailed";
    case Err::DepthTooLarge: return "DepthTooLarge";
    case Err::AtomOnEndpoint: return "AtomOnEndpoint";
    case Err::ConfigInvalid: return "ConfigInvalid";
    case Err::InvariantViolation: return "InvariantViolation";
    case Err::Internal: return "Internal";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Err code, const std::string& what)
      : std::runtime_error(std::string(err_name(code)) + ": " + what), code_(code) {}
  Err code() const { return code_; }

 private:
  Err code_;
};

[[noreturn]] inline void fail(Err code, const std::string& what) { throw Error(code, what); }

inline void require(bool ok, Err code, const std::string& what) {
  if (!ok) fail(code, what);
}

}  // namespace tw
