#pragma once

#include <vector>

#include <json.hpp>

#include "cdc/config.hpp"

namespace cdc {

/// The coded placement: a disjoint batch of eta1 files for every r-subset of
/// servers, plus a balanced partition of the output functions.
///
/// Batches follow lexicographic subset order; the i-th subset (1-based) gets
/// files [(i-1)*eta1 + 1 : i*eta1]. This makes file -> batch lookups O(1) and
/// the whole placement reproducible byte-for-byte.
class Placement {
 public:
  const ValidatedConfig& config() const { return cfg_; }

  /// All r-subsets of [1:K] in lexicographic order, aligned with batches.
  const std::vector<std::vector<int>>& batch_subsets() const { return subsets_; }

  /// Files in the batch of the i-th subset (0-based batch index).
  std::vector<int> batch_files(int batch_index) const;

  /// Files stored at server k (sorted ascending). |M_k| = r*N/K.
  const std::vector<int>& server_files(int server) const;

  /// Functions assigned to server k (round-robin: {k, k+K, ...}).
  const std::vector<int>& server_functions(int server) const;

  bool server_has_file(int server, int file) const;

  /// 0-based index of the batch holding `file`.
  int batch_index_of_file(int file) const;

  /// The r servers storing `file`, sorted ascending.
  const std::vector<int>& file_owners(int file) const;

  /// The server assigned function q under the round-robin partition.
  int function_owner(int function) const;

  nlohmann::ordered_json to_json() const;

 private:
  friend Placement place_files(const ValidatedConfig&);
  explicit Placement(const ValidatedConfig& cfg) : cfg_(cfg) {}

  ValidatedConfig cfg_;
  std::vector<std::vector<int>> subsets_;
  std::vector<std::vector<int>> server_files_;      // [K], 1-based server -> index-1
  std::vector<std::vector<int>> server_functions_;  // [K]
  std::vector<std::vector<bool>> has_file_;         // [K][N]
};

/// Build the placement for a validated config.
Placement place_files(const ValidatedConfig& cfg);

/// The round-robin function partition on its own: W_k = {k, k+K, ...} with
/// eta2 members. Any balanced partition is equivalent by symmetry; round
/// robin keeps it deterministic.
std::vector<std::vector<int>> assign_functions(const ValidatedConfig& cfg);

}  // namespace cdc
