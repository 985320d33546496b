#pragma once

#include <stdexcept>
#include <string>

namespace qwblow {

/// Bad user input: malformed config, violated preconditions on data or options.
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

/// A numerical procedure could not deliver its contract (quadrature, fold, ...).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// The characteristic fan has folded: q is no longer monotone in s.
class FoldError : public NumericalError {
 public:
  explicit FoldError(const std::string& what) : NumericalError(what) {}
};

}  // namespace qwblow
