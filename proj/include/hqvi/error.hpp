#pragma once

#include <stdexcept>
#include <string>

namespace hqvi {

enum class ErrorCode {
  RankChainInvalid,
  EquivariantParamsDegenerate,
  InvalidArgument,
  InsertionParse,
  InsertionInhomogeneous,
  UnboundedSupport,
  DegenerateSolution,
  ZeroParameter,
  IncompleteSolutionSet,
  JNearZero,
  RoundingUnsafe,
  ResidualTooLarge,
  RootsDegenerate,
  HypothesisNotMet,
  NotDivisible,
  Unsupported,
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::RankChainInvalid: return "RANK_CHAIN_INVALID";
    case ErrorCode::EquivariantParamsDegenerate: return "EQUIVARIANT_PARAMS_DEGENERATE";
    case ErrorCode::InvalidArgument: return "INVALID_ARGUMENT";
    case ErrorCode::InsertionParse: return "INSERTION_PARSE";
    case ErrorCode::InsertionInhomogeneous: return "INSERTION_INHOMOGENEOUS";
    case ErrorCode::UnboundedSupport: return "UNBOUNDED_SUPPORT";
    case ErrorCode::DegenerateSolution: return "DEGENERATE_SOLUTION";
    case ErrorCode::ZeroParameter: return "ZERO_PARAMETER";
    case ErrorCode::IncompleteSolutionSet: return "INCOMPLETE_SOLUTION_SET";
    case ErrorCode::JNearZero: return "J_NEAR_ZERO";
    case ErrorCode::RoundingUnsafe: return "ROUNDING_UNSAFE";
    case ErrorCode::ResidualTooLarge: return "RESIDUAL_TOO_LARGE";
    case ErrorCode::RootsDegenerate: return "ROOTS_DEGENERATE";
    case ErrorCode::HypothesisNotMet: return "HYPOTHESIS_NOT_MET";
    case ErrorCode::NotDivisible: return "NOT_DIVISIBLE";
    case ErrorCode::Unsupported: return "UNSUPPORTED";
  }
  return "UNKNOWN";
}

/// True for errors caused by bad input rather than numerical trouble.
inline bool is_input_error(ErrorCode c) {
  switch (c) {
    case ErrorCode::RankChainInvalid:
    case ErrorCode::EquivariantParamsDegenerate:
    case ErrorCode::InvalidArgument:
    case ErrorCode::InsertionParse:
    case ErrorCode::InsertionInhomogeneous:
    case ErrorCode::UnboundedSupport:
    case ErrorCode::HypothesisNotMet:
    case ErrorCode::Unsupported:
      return true;
    default:
      return false;
  }
}

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  [[nodiscard]] ErrorCode code() const { return code_; }

private:
  ErrorCode code_;
};

}  // namespace hqvi
