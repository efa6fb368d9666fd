#pragma once

#include <stdexcept>

namespace fermistab {

/// Invalid inputs: out-of-range parameters, malformed charges, wrong method.
struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct InvalidRange : DomainError {
  using DomainError::DomainError;
};

struct NoSignChange : DomainError {
  using DomainError::DomainError;
};

struct MethodMismatch : DomainError {
  using DomainError::DomainError;
};

struct DuplicateChannel : DomainError {
  using DomainError::DomainError;
};

struct UnstableRegime : DomainError {
  using DomainError::DomainError;
};

struct WrongN : DomainError {
  using DomainError::DomainError;
};

struct UnsupportedN : DomainError {
  using DomainError::DomainError;
};

struct SupportOverlap : DomainError {
  using DomainError::DomainError;
};

struct BadProfile : DomainError {
  using DomainError::DomainError;
};

/// Numerical failures: tolerance not reached within the configured budget.
struct NonConvergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GridTooCoarse : NonConvergence {
  using NonConvergence::NonConvergence;
};

struct TruncationWarning : NonConvergence {
  using NonConvergence::NonConvergence;
};

struct ZeroDensity : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace fermistab
