#pragma once

#include <cstdint>

#include "cdc/errors.hpp"

namespace cdc {

/// Cluster parameters. Servers, files and functions are 1-based throughout,
/// i.e. servers are [1:server_count], files [1:file_count], functions
/// [1:function_count].
struct ClusterConfig {
  int server_count = 0;         // K
  int function_count = 0;       // Q
  int file_count = 0;           // N
  int redundancy = 0;           // r: how many servers store each file
  std::int64_t value_bits = 0;  // T: size of one intermediate value, in bits
  int files_per_batch = 0;      // eta1: files assigned to each r-subset
  int functions_per_server = 0; // eta2
};

/// A ClusterConfig whose invariants have been checked. Construction only via
/// validate_config, so holding one is proof of validity.
class ValidatedConfig {
 public:
  int server_count() const { return cfg_.server_count; }
  int function_count() const { return cfg_.function_count; }
  int file_count() const { return cfg_.file_count; }
  int redundancy() const { return cfg_.redundancy; }
  std::int64_t value_bits() const { return cfg_.value_bits; }
  int files_per_batch() const { return cfg_.files_per_batch; }
  int functions_per_server() const { return cfg_.functions_per_server; }

  const ClusterConfig& raw() const { return cfg_; }

  /// eta1 * eta2: exchange rounds per (r+1)-subset in the shuffle.
  std::int64_t rounds_per_subset() const {
    return static_cast<std::int64_t>(cfg_.files_per_batch) * cfg_.functions_per_server;
  }

  /// N * Q as a 64-bit count.
  std::int64_t total_values() const {
    return static_cast<std::int64_t>(cfg_.file_count) * cfg_.function_count;
  }

 private:
  friend ValidatedConfig validate_config(const ClusterConfig&);
  explicit ValidatedConfig(const ClusterConfig& cfg) : cfg_(cfg) {}
  ClusterConfig cfg_;
};

/// Checks every invariant and returns the config as validated, or throws a
/// ConfigError listing all violations (not just the first):
///   - 1 <= r <= K, all counts positive
///   - N = C(K,r) * eta1 and Q = K * eta2
///   - T divisible by lcm(1..r), so any split into r' <= r equal parts is an
///     integer number of bits
ValidatedConfig validate_config(const ClusterConfig& cfg);

/// Convenience for the CLI: derive eta1 = N / C(K,r) and eta2 = Q / K, then
/// validate. value_bits == 0 means "default to lcm(1..r)".
ValidatedConfig derive_config(int server_count, int function_count, int file_count,
                              int redundancy, std::int64_t value_bits = 0);

}  // namespace cdc
