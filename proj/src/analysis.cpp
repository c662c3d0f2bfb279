#include "cdc/analysis.hpp"

#include <sstream>

#include "cdc/combinatorics.hpp"

namespace cdc {

Rational optimal_comm_load(int server_count, int redundancy) {
  if (redundancy < 1 || redundancy > server_count) {
    throw RangeError("optimal_comm_load: redundancy outside [1:K]");
  }
  return Rational(Integer(server_count - redundancy),
                  Integer(redundancy) * server_count);
}

namespace {

// r'(K-r'+1)*N*Q/K for any candidate r'. Q/K = eta2 keeps it exact.
std::int64_t min_computation_at(const ValidatedConfig& cfg, int redundancy) {
  return static_cast<std::int64_t>(redundancy) * (cfg.server_count() - redundancy + 1) *
         cfg.file_count() * cfg.functions_per_server();
}

}  // namespace

std::int64_t cdc_min_computation(const ValidatedConfig& cfg) {
  return min_computation_at(cfg, cfg.redundancy());
}

std::int64_t per_server_min_computation(const ValidatedConfig& cfg) {
  // r*N*Q*(K-r+1)/K^2 = C(K-1,r-1)*eta1*eta2*(K-r+1), always an integer.
  return static_cast<std::int64_t>(binomial(static_cast<unsigned>(cfg.server_count() - 1),
                                            static_cast<unsigned>(cfg.redundancy() - 1))) *
         cfg.files_per_batch() * cfg.functions_per_server() *
         (cfg.server_count() - cfg.redundancy() + 1);
}

std::int64_t naive_computation(const ValidatedConfig& cfg) {
  return static_cast<std::int64_t>(cfg.redundancy()) * cfg.file_count() * cfg.function_count();
}

CdcFit cdc_fit(const ValidatedConfig& cfg, const Rational& budget) {
  // The cost r'(K-r'+1)NQ/K is a downward parabola in r', so the feasible set
  // need not be a prefix of [1:r]; scan all candidates and keep the max.
  int best = 0;
  for (int rp = 1; rp <= cfg.redundancy(); ++rp) {
    if (budget >= Rational(min_computation_at(cfg, rp))) {
      best = rp;
    }
  }
  if (best == 0) {
    std::ostringstream os;
    os << "cdc_fit: budget " << budget.to_string() << " below N*Q = " << cfg.total_values();
    throw BudgetInfeasible(os.str());
  }
  return {best, optimal_comm_load(cfg.server_count(), best)};
}

namespace {

// Configs per sweep point: eta1 re-derived for each r, value size irrelevant
// to the closed forms but kept valid.
std::vector<int> feasible_redundancies(const ValidatedConfig& cfg) {
  std::vector<int> out;
  for (int r = 1; r <= cfg.server_count(); ++r) {
    const auto batches =
        binomial(static_cast<unsigned>(cfg.server_count()), static_cast<unsigned>(r));
    if (static_cast<std::uint64_t>(cfg.file_count()) % batches == 0) {
      out.push_back(r);
    }
  }
  return out;
}

ValidatedConfig config_at(const ValidatedConfig& cfg, int redundancy) {
  return derive_config(cfg.server_count(), cfg.function_count(), cfg.file_count(), redundancy);
}

}  // namespace

std::vector<Figure1Row> figure1_series(const ValidatedConfig& cfg) {
  std::vector<Figure1Row> rows;
  for (const int r : feasible_redundancies(cfg)) {
    const auto at_r = config_at(cfg, r);
    rows.push_back({r, cdc_min_computation(at_r), naive_computation(at_r)});
  }
  return rows;
}

std::vector<Figure2Row> figure2_series(const ValidatedConfig& cfg) {
  std::vector<Figure2Row> rows;
  for (const int r : feasible_redundancies(cfg)) {
    const auto at_r = config_at(cfg, r);
    const auto load = optimal_comm_load(cfg.server_count(), r);
    rows.push_back({cdc_min_computation(at_r), load, "cdc-min"});
    rows.push_back({naive_computation(at_r), load, "naive"});
  }
  return rows;
}

std::string figure1_csv(const std::vector<Figure1Row>& rows) {
  std::ostringstream os;
  os << "r,comp_min,comp_naive\n";
  for (const auto& row : rows) {
    os << row.redundancy << "," << row.comp_min << "," << row.comp_naive << "\n";
  }
  return os.str();
}

std::string figure2_csv(const std::vector<Figure2Row>& rows) {
  std::ostringstream os;
  os << "comp,comm,comm_decimal,scheme\n";
  for (const auto& row : rows) {
    os << row.computation << "," << row.communication.to_string() << ","
       << row.communication.to_decimal() << "," << row.scheme << "\n";
  }
  return os.str();
}

}  // namespace cdc
