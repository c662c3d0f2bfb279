#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace cdc {

/// Parameter outside its documented range (e.g. redundancy not in [1:K]).
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// A divisibility assumption does not hold (N = C(K,r)*eta1, Q = K*eta2,
/// or T not divisible by lcm(1..r)).
class DivisibilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised by validate_config; carries every violated invariant, not just
/// the first one found.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> violations);

  const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

/// Computation budget below the feasibility floor (budget < N*Q).
class BudgetInfeasible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cdc
