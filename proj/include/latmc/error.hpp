#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace latmc {

enum class ErrorCode {
  NotALattice,
  NotDistributive,
  BadInvolution,
  Unbounded,
  NoInvolution,
  ForeignElement,
  UnknownElement,
  SyntaxError,
  ShadowedVariable,
  NegationOfNonAtom,
  NotCtlFragment,
  UnknownState,
  UnknownAtom,
  EmptySuccessor,
  NotAffine,
  NotUpwardClosed,
  NotMonotone,
  LatticeMismatch,
  UnboundVariable,
  NoConvergence,
  UnsupportedSource,
  PreconditionFailed,
  NotBool2,
  TooLarge,
  BadDocument,
  Internal,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotALattice: return "NotALattice";
    case ErrorCode::NotDistributive: return "NotDistributive";
    case ErrorCode::BadInvolution: return "BadInvolution";
    case ErrorCode::Unbounded: return "Unbounded";
    case ErrorCode::NoInvolution: return "NoInvolution";
    case ErrorCode::ForeignElement: return "ForeignElement";
    case ErrorCode::UnknownElement: return "UnknownElement";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::ShadowedVariable: return "ShadowedVariable";
    case ErrorCode::NegationOfNonAtom: return "NegationOfNonAtom";
    case ErrorCode::NotCtlFragment: return "NotCtlFragment";
    case ErrorCode::UnknownState: return "UnknownState";
    case ErrorCode::UnknownAtom: return "UnknownAtom";
    case ErrorCode::EmptySuccessor: return "EmptySuccessor";
    case ErrorCode::NotAffine: return "NotAffine";
    case ErrorCode::NotUpwardClosed: return "NotUpwardClosed";
    case ErrorCode::NotMonotone: return "NotMonotone";
    case ErrorCode::LatticeMismatch: return "LatticeMismatch";
    case ErrorCode::UnboundVariable: return "UnboundVariable";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::UnsupportedSource: return "UnsupportedSource";
    case ErrorCode::PreconditionFailed: return "PreconditionFailed";
    case ErrorCode::NotBool2: return "NotBool2";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::BadDocument: return "BadDocument";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

/// Every engine failure carries a machine-readable code; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace latmc
