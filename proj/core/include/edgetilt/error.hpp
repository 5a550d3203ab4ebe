#pragma once

#include <stdexcept>
#include <string>

namespace edgetilt {

enum class ErrorKind {
  kParse,                  // malformed die text
  kInvalidDie,             // probabilities do not sum to 1, fewer than two values, ...
  kDegenerate,             // zero variance
  kBudgetExceeded,         // exact convolution would exceed the resource budget
  kSymmetricUndetermined,  // leading constant L is exactly zero
  kBelowValidityFloor,     // n too small for the explicit bound to apply
  kInvalidArgument,
  kSearchCapExceeded,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace edgetilt
