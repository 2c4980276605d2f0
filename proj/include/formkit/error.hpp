#pragma once

#include <stdexcept>
#include <string>

namespace formkit {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input: bad field spec, bad JSON, shape mismatch.
struct ValidationError : Error {
  using Error::Error;
};

/// A stated mathematical hypothesis fails for the given input.
struct HypothesisError : Error {
  using Error::Error;
};

/// An enumeration would exceed the configured candidate budget.
struct BudgetError : Error {
  using Error::Error;
};

/// A constructed object failed its own certificate. This is a bug, not a
/// user error; it is never expected to fire.
struct CertificationError : Error {
  using Error::Error;
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw ValidationError(msg);
}

inline void require_hyp(bool cond, const std::string& msg) {
  if (!cond) throw HypothesisError(msg);
}

inline void certify(bool cond, const std::string& msg) {
  if (!cond) throw CertificationError(msg);
}

}  // namespace formkit
