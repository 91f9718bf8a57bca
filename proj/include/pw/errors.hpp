#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pw {

enum class ErrorCode {
  DomainError = 1,
  IndexError,
  DimensionError,
  SingularMatrix,
  NotInjective,
  UnsupportedRep,
  ResourceLimit,
  UndefinedBandwidth,
  DegenerateLine,
  ResolutionTooCoarse,
  WrongRegime,
  Precondition,
  IoError,
  ParseError,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Raised when a map that must be injective has a nontrivial kernel.
// Carries an orthonormal kernel basis so callers can inspect the
// invariant directions.
class NotInjectiveError : public Error {
 public:
  NotInjectiveError(const std::string& what,
                    std::vector<std::vector<double>> kernel)
      : Error(ErrorCode::NotInjective, what), kernel_(std::move(kernel)) {}

  const std::vector<std::vector<double>>& kernel_basis() const noexcept {
    return kernel_;
  }

 private:
  std::vector<std::vector<double>> kernel_;
};

}  // namespace pw
