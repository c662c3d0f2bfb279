#include "cdc/lp.hpp"

#include <algorithm>
#include <optional>
#include <sstream>

#include "cdc/combinatorics.hpp"

namespace cdc {

SplitCosts split_costs(int redundancy, int split_size) {
  if (split_size < 1 || split_size > redundancy) {
    throw RangeError("split_costs: split size outside [1:r]");
  }
  SplitCosts c;
  c.split_size = split_size;
  c.groups = (redundancy + 1) / (split_size + 1);
  c.leftover = redundancy - c.groups * (split_size + 1);  // r'' = (r+1) - j(r'+1) - 1

  const std::int64_t j = c.groups;
  const std::int64_t rp = split_size;
  const std::int64_t rdd = c.leftover;

  if (c.leftover == -1) {
    // Groups tile the subset exactly; no leftover term.
    c.comp_per_value = j * rp * (rp + 1);
    c.comm_per_value = Rational(Integer(j * (rp + 1)), Integer(rp));
  } else if (c.leftover == 0) {
    // Lone server: one unicast of the whole value.
    c.comp_per_value = j * rp * (rp + 1) + 1;
    c.comm_per_value = Rational(Integer(j * (rp + 1)), Integer(rp)) + Rational(1);
  } else {
    c.comp_per_value = j * rp * (rp + 1) + rdd * (rdd + 1);
    c.comm_per_value = Rational(Integer(j * (rp + 1)), Integer(rp)) +
                       Rational(Integer(rdd + 1), Integer(rdd));
  }
  return c;
}

namespace {

// Exact Gaussian elimination for the square tight system; nullopt if
// singular.
std::optional<std::vector<Rational>> solve_square(std::vector<std::vector<Rational>> a,
                                                  std::vector<Rational> b) {
  const std::size_t n = a.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a[pivot][col].is_zero()) {
      ++pivot;
    }
    if (pivot == n) {
      return std::nullopt;
    }
    std::swap(a[pivot], a[col]);
    std::swap(b[pivot], b[col]);
    for (std::size_t row = 0; row < n; ++row) {
      if (row == col || a[row][col].is_zero()) {
        continue;
      }
      const Rational factor = a[row][col] / a[col][col];
      for (std::size_t j = col; j < n; ++j) {
        a[row][j] -= factor * a[col][j];
      }
      b[row] -= factor * b[col];
    }
  }
  std::vector<Rational> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = b[i] / a[i][i];
  }
  return x;
}

bool satisfies(const LinearConstraint& c, const std::vector<Rational>& z) {
  Rational lhs;
  for (std::size_t i = 0; i < z.size(); ++i) {
    lhs += c.coefficients[i] * z[i];
  }
  switch (c.sense) {
    case ConstraintSense::LessEq:
      return lhs <= c.rhs;
    case ConstraintSense::GreaterEq:
      return lhs >= c.rhs;
    case ConstraintSense::Equal:
      return lhs == c.rhs;
  }
  return false;
}

// Tie-break: lexicographically larger weight vector read from the highest
// variable down.
bool lex_prefer(const std::vector<Rational>& a, const std::vector<Rational>& b) {
  for (std::size_t i = a.size(); i-- > 0;) {
    if (a[i] != b[i]) {
      return a[i] > b[i];
    }
  }
  return false;
}

// Enumerate candidate supports and tight constraint subsets; keep the best
// feasible point. Does not look for unbounded rays.
std::optional<LpSolution> best_vertex(const LpProblem& problem) {
  const std::size_t n = problem.objective.size();
  const std::size_t m = problem.constraints.size();
  for (const auto& c : problem.constraints) {
    if (c.coefficients.size() != n) {
      throw std::invalid_argument("solve_small_lp: constraint arity mismatch");
    }
  }

  std::optional<LpSolution> best;
  const auto consider = [&](const std::vector<Rational>& z) {
    for (const auto& c : problem.constraints) {
      if (!satisfies(c, z)) {
        return;
      }
    }
    Rational obj;
    for (std::size_t i = 0; i < n; ++i) {
      obj += problem.objective[i] * z[i];
    }
    if (!best || obj < best->objective ||
        (obj == best->objective && lex_prefer(z, best->weights))) {
      LpSolution s;
      s.status = LpStatus::Optimal;
      s.weights = z;
      s.objective = obj;
      best = std::move(s);
    }
  };

  const std::size_t max_support = std::min(n, m);
  for (std::size_t k = 0; k <= max_support; ++k) {
    const auto supports = subsets_of_size(static_cast<int>(n), static_cast<int>(k));
    const auto rows = subsets_of_size(static_cast<int>(m), static_cast<int>(k));
    for (const auto& support : supports) {
      for (const auto& row_set : rows) {
        std::vector<std::vector<Rational>> a(k, std::vector<Rational>(k));
        std::vector<Rational> b(k);
        for (std::size_t ri = 0; ri < k; ++ri) {
          const auto& c = problem.constraints[static_cast<std::size_t>(row_set[ri] - 1)];
          for (std::size_t ci = 0; ci < k; ++ci) {
            a[ri][ci] = c.coefficients[static_cast<std::size_t>(support[ci] - 1)];
          }
          b[ri] = c.rhs;
        }
        const auto x = solve_square(std::move(a), std::move(b));
        if (!x) {
          continue;
        }
        bool nonneg = true;
        for (const auto& v : *x) {
          if (v < Rational(0)) {
            nonneg = false;
            break;
          }
        }
        if (!nonneg) {
          continue;
        }
        std::vector<Rational> z(n);
        for (std::size_t ci = 0; ci < k; ++ci) {
          z[static_cast<std::size_t>(support[ci] - 1)] = (*x)[ci];
        }
        consider(z);
      }
    }
  }
  return best;
}

}  // namespace

LpSolution solve_small_lp(const LpProblem& problem) {
  auto best = best_vertex(problem);
  if (!best) {
    LpSolution s;
    s.status = LpStatus::Infeasible;
    return s;
  }

  // Feasible: unbounded iff some recession direction improves the objective.
  // Normalizing with sum(d) = 1 makes the ray polytope bounded, so the same
  // vertex enumeration solves it exactly.
  LpProblem ray;
  ray.objective = problem.objective;
  for (const auto& c : problem.constraints) {
    ray.constraints.push_back({c.coefficients, c.sense, Rational(0)});
  }
  LinearConstraint simplex;
  simplex.coefficients.assign(problem.objective.size(), Rational(1));
  simplex.sense = ConstraintSense::Equal;
  simplex.rhs = Rational(1);
  ray.constraints.push_back(std::move(simplex));

  const auto ray_best = best_vertex(ray);
  if (ray_best && ray_best->objective < Rational(0)) {
    LpSolution s;
    s.status = LpStatus::Unbounded;
    return s;
  }
  return *best;
}

namespace {

struct BudgetLpContext {
  std::int64_t delivery_need = 0;  // (K-r)NQ/K
  std::int64_t local_comp = 0;     // rNQ/K
};

BudgetLpContext context_for(const ValidatedConfig& cfg) {
  // NQ/K = N*eta2 keeps everything an exact integer.
  const std::int64_t n_eta2 =
      static_cast<std::int64_t>(cfg.file_count()) * cfg.functions_per_server();
  return {(cfg.server_count() - cfg.redundancy()) * n_eta2, cfg.redundancy() * n_eta2};
}

void require_budget_floor(const ValidatedConfig& cfg, const Rational& budget,
                          const char* what) {
  if (budget < Rational(cfg.total_values())) {
    std::ostringstream os;
    os << what << ": budget " << budget.to_string() << " below the all-unicast minimum N*Q = "
       << cfg.total_values();
    throw BudgetInfeasible(os.str());
  }
}

}  // namespace

LpSolution lower_bound(const ValidatedConfig& cfg, const Rational& budget) {
  require_budget_floor(cfg, budget, "lower_bound");
  const auto ctx = context_for(cfg);
  const int r = cfg.redundancy();
  const Rational nq(cfg.total_values());

  LpProblem p;
  p.objective.assign(static_cast<std::size_t>(r), Rational(Integer(1), Integer(cfg.total_values())));

  LinearConstraint delivery;
  LinearConstraint computation;
  for (int l = 1; l <= r; ++l) {
    delivery.coefficients.emplace_back(l);
    computation.coefficients.emplace_back(static_cast<long long>(l) * l);
  }
  delivery.sense = ConstraintSense::GreaterEq;
  delivery.rhs = Rational(ctx.delivery_need);
  computation.sense = ConstraintSense::LessEq;
  computation.rhs = budget - Rational(ctx.local_comp);
  p.constraints = {std::move(delivery), std::move(computation)};

  auto solution = solve_small_lp(p);
  if (solution.status != LpStatus::Optimal) {
    throw std::logic_error("lower_bound: LP unexpectedly not optimal");
  }
  solution.budget = budget;
  return solution;
}

LpSolution scdc_optimize(const ValidatedConfig& cfg, const Rational& budget) {
  require_budget_floor(cfg, budget, "scdc_optimize");
  const auto ctx = context_for(cfg);
  const int r = cfg.redundancy();
  const Integer subsets = Integer(binomial(static_cast<unsigned>(cfg.server_count()),
                                           static_cast<unsigned>(r + 1)));

  LpProblem p;
  LinearConstraint mass;
  LinearConstraint computation;
  for (int l = 1; l <= r; ++l) {
    const auto costs = split_costs(r, l);
    p.objective.push_back(Rational(subsets, Integer(cfg.total_values())) * costs.comm_per_value);
    mass.coefficients.emplace_back(1);
    computation.coefficients.push_back(Rational(subsets) * Rational(costs.comp_per_value));
  }
  mass.sense = ConstraintSense::Equal;
  mass.rhs = Rational(cfg.rounds_per_subset());
  computation.sense = ConstraintSense::LessEq;
  computation.rhs = budget - Rational(ctx.local_comp);
  p.constraints = {std::move(mass), std::move(computation)};

  auto solution = solve_small_lp(p);
  if (solution.status != LpStatus::Optimal) {
    throw std::logic_error("scdc_optimize: LP unexpectedly not optimal");
  }
  solution.budget = budget;
  return solution;
}

RoundedPlan round_plan(const LpSolution& solution, const ValidatedConfig& cfg) {
  if (!solution.feasible()) {
    throw std::invalid_argument("round_plan: solution is not feasible");
  }
  std::vector<std::size_t> support;
  for (std::size_t i = 0; i < solution.weights.size(); ++i) {
    if (!solution.weights[i].is_zero()) {
      support.push_back(i);
    }
  }
  if (support.size() > 2) {
    throw UnexpectedSupport("round_plan: more than two nonzero weights");
  }

  RoundedPlan plan;
  plan.weights.assign(solution.weights.size(), 0);

  bool all_integer = true;
  for (const auto i : support) {
    if (!solution.weights[i].is_integer()) {
      all_integer = false;
    }
  }

  if (all_integer) {
    for (const auto i : support) {
      plan.weights[i] = solution.weights[i].numerator().convert_to<std::int64_t>();
    }
  } else {
    // The mass constraint sums to an integer, so a fractional vertex has
    // exactly two fractional weights.
    if (support.size() != 2 || solution.weights[support[0]].is_integer() ||
        solution.weights[support[1]].is_integer()) {
      throw UnexpectedSupport("round_plan: fractional solution without two fractional weights");
    }
    const std::size_t low = support[0];
    const std::size_t high = support[1];
    const std::int64_t floored = solution.weights[high].floor().convert_to<std::int64_t>();
    plan.weights[high] = floored;
    plan.weights[low] = cfg.rounds_per_subset() - floored;
  }

  const std::int64_t subsets = static_cast<std::int64_t>(binomial(
      static_cast<unsigned>(cfg.server_count()), static_cast<unsigned>(cfg.redundancy() + 1)));
  const std::int64_t local =
      static_cast<std::int64_t>(cfg.redundancy()) * cfg.file_count() * cfg.functions_per_server();

  Rational comm;
  std::int64_t comp = 0;
  for (std::size_t i = 0; i < plan.weights.size(); ++i) {
    if (plan.weights[i] == 0) {
      continue;
    }
    const auto costs = split_costs(cfg.redundancy(), static_cast<int>(i) + 1);
    comm += Rational(plan.weights[i]) * costs.comm_per_value;
    comp += plan.weights[i] * costs.comp_per_value;
  }
  plan.objective = Rational(Integer(subsets), Integer(cfg.total_values())) * comm;
  plan.predicted_computation = subsets * comp + local;
  plan.within_budget = Rational(plan.predicted_computation) <= solution.budget;
  return plan;
}

nlohmann::ordered_json solution_to_json(const LpSolution& solution) {
  nlohmann::ordered_json weights = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < solution.weights.size(); ++i) {
    if (solution.weights[i].is_zero()) {
      continue;
    }
    weights.push_back({{"ell", i + 1},
                       {"z_num", solution.weights[i].numerator().convert_to<long long>()},
                       {"z_den", solution.weights[i].denominator().convert_to<long long>()}});
  }
  nlohmann::ordered_json j;
  if (solution.budget.is_integer()) {
    j["budget"] = solution.budget.numerator().convert_to<long long>();
  } else {
    j["budget"] = solution.budget.to_string();
  }
  j["feasible"] = solution.feasible();
  j["weights"] = weights;
  if (solution.feasible()) {
    j["objective"] = solution.objective.to_string();
  } else {
    j["objective"] = nullptr;
  }
  return j;
}

}  // namespace cdc
