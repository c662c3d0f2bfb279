#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "cdc/config.hpp"
#include "cdc/rational.hpp"

namespace cdc {

/// Per-subset cost of serving one exchange round with a given split size:
/// the (r+1)-subset is partitioned into `groups` coded groups of split+1
/// servers plus a leftover of leftover+1 (leftover == -1 means none; 0 means
/// a lone server served by unicast).
struct SplitCosts {
  int split_size = 0;             // r' in [1:r]
  int groups = 0;                 // floor((r+1)/(r'+1))
  int leftover = 0;               // r'' = r - groups*(r'+1), in {-1,0,...,r'-1}
  std::int64_t comp_per_value = 0;  // map computations per round
  Rational comm_per_value;          // packets (units of T bits) per round
};

SplitCosts split_costs(int redundancy, int split_size);

enum class LpStatus { Optimal, Infeasible, Unbounded };

enum class ConstraintSense { LessEq, GreaterEq, Equal };

struct LinearConstraint {
  std::vector<Rational> coefficients;
  ConstraintSense sense = ConstraintSense::LessEq;
  Rational rhs;
};

/// min objective . z  subject to the constraints and z >= 0.
struct LpProblem {
  std::vector<Rational> objective;
  std::vector<LinearConstraint> constraints;
};

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  std::vector<Rational> weights;  // index i -> variable i (split size i+1 in the budget LPs)
  Rational objective;
  Rational budget;  // set by the budgeted solvers, for serialization

  bool feasible() const { return status == LpStatus::Optimal; }
};

/// Exact solver for tiny LPs (a handful of constraints, up to ~a dozen
/// variables): enumerates every candidate support of size <= #constraints,
/// solves the square tight systems in exact rationals, keeps feasible
/// vertices, and returns the best. Ties between vertices prefer the
/// lexicographically largest weight vector read from the highest variable
/// down (for the budget LPs this prefers fewer, larger coded groups).
/// Unboundedness is detected with a normalized recession-ray subproblem.
LpSolution solve_small_lp(const LpProblem& problem);

/// Communication lower bound: min sum z_l/(NQ) over l-type transmission
/// counts subject to delivering (K-r)NQ/K values and the computation budget
/// sum l^2 z_l + rNQ/K <= budget. Throws BudgetInfeasible iff budget < NQ.
LpSolution lower_bound(const ValidatedConfig& cfg, const Rational& budget);

/// S-CDC optimizer: min C(K,r+1) sum z_l Comm(l)/(NQ) subject to
/// sum z_l = eta1*eta2 and C(K,r+1) sum z_l Comp(l) + rNQ/K <= budget.
/// Throws BudgetInfeasible iff budget < NQ.
LpSolution scdc_optimize(const ValidatedConfig& cfg, const Rational& budget);

/// An optimal vertex has more nonzero weights than constraints.
class UnexpectedSupport : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct RoundedPlan {
  std::vector<std::int64_t> weights;  // index i -> split size i+1; sums to eta1*eta2
  Rational objective;                 // rounded communication load
  std::int64_t predicted_computation = 0;
  bool within_budget = false;
};

/// Integer rounding of an S-CDC solution: with two nonzero weights l1 < l2,
/// floor the larger split size and move the remainder to the smaller one.
/// Already-integer solutions pass through. Computation feasibility is
/// re-checked after rounding rather than assumed.
RoundedPlan round_plan(const LpSolution& solution, const ValidatedConfig& cfg);

/// {"budget", "feasible", "weights": [{"ell", "z_num", "z_den"}],
///  "objective": "p/q"} per the wire schema.
nlohmann::ordered_json solution_to_json(const LpSolution& solution);

}  // namespace cdc
