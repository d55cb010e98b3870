#ifndef EIVM_ERRORS_HPP
#define EIVM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace eivm {

// Statistical degeneracy errors. These are expected, recoverable outcomes on
// unlucky data (finite-sample proviso violations), distinct from input
// validation failures which use std::invalid_argument.
enum class ErrorKind {
  not_positive_definite,
  degenerate_denominator,
  beta_near_zero,
};

inline const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::not_positive_definite: return "not_positive_definite";
    case ErrorKind::degenerate_denominator: return "degenerate_denominator";
    case ErrorKind::beta_near_zero: return "beta_near_zero";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

class NotPositiveDefinite : public Error {
 public:
  explicit NotPositiveDefinite(const std::string& what)
      : Error(ErrorKind::not_positive_definite, what) {}
};

class DegenerateDenominator : public Error {
 public:
  // `name` identifies which proviso failed, `value` its observed value.
  DegenerateDenominator(const std::string& name, double value)
      : Error(ErrorKind::degenerate_denominator,
              "degenerate denominator: " + name + " = " + std::to_string(value)),
        name_(name),
        value_(value) {}
  const std::string& name() const { return name_; }
  double value() const { return value_; }

 private:
  std::string name_;
  double value_;
};

class BetaNearZero : public Error {
 public:
  explicit BetaNearZero(double beta)
      : Error(ErrorKind::beta_near_zero,
              "slope too close to zero for this variant: beta = " +
                  std::to_string(beta)) {}
};

}  // namespace eivm

#endif  // EIVM_ERRORS_HPP
