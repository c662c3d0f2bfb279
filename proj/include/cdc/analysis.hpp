#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cdc/config.hpp"
#include "cdc/rational.hpp"

namespace cdc {

/// Optimal CDC communication load (K-r)/(rK), in lowest terms.
Rational optimal_comm_load(int server_count, int redundancy);

/// Minimum total map computations that still support the CDC shuffle:
/// r*N*Q*(K-r+1)/K. Exact integer under the config invariants.
std::int64_t cdc_min_computation(const ValidatedConfig& cfg);

/// Per-server share of the minimum: cdc_min_computation / K.
std::int64_t per_server_min_computation(const ValidatedConfig& cfg);

/// Computations when every server maps all functions over all stored files:
/// r*N*Q. The comparison curve.
std::int64_t naive_computation(const ValidatedConfig& cfg);

struct CdcFit {
  int fitted_redundancy = 0;  // r*
  Rational load;              // (K - r*)/(r* K)
};

/// CDC-fit: the largest r' <= r whose minimum computation fits the budget,
/// operating the cluster as if files were only repeated r' times. Throws
/// BudgetInfeasible when budget < N*Q (not even r' = 1 fits).
CdcFit cdc_fit(const ValidatedConfig& cfg, const Rational& budget);

struct Figure1Row {
  int redundancy = 0;
  std::int64_t comp_min = 0;
  std::int64_t comp_naive = 0;
};

struct Figure2Row {
  std::int64_t computation = 0;
  Rational communication;
  std::string scheme;  // "cdc-min" or "naive"
};

/// Sweep r = 1..K, emitting only r values for which C(K,r) divides N.
std::vector<Figure1Row> figure1_series(const ValidatedConfig& cfg);

/// The communication/computation trade-off: the minimum-computation curve and
/// the scaled naive curve, both against the optimal load L*(r).
std::vector<Figure2Row> figure2_series(const ValidatedConfig& cfg);

std::string figure1_csv(const std::vector<Figure1Row>& rows);
std::string figure2_csv(const std::vector<Figure2Row>& rows);

}  // namespace cdc
