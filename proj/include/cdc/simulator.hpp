#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "cdc/bitstring.hpp"
#include "cdc/placement.hpp"
#include "cdc/rational.hpp"

namespace cdc {

/// Identifies the intermediate value of (function, file): the T-bit result of
/// mapping that file for that function.
struct IVId {
  int function = 0;  // in [1:Q]
  int file = 0;      // in [1:N]

  auto operator<=>(const IVId&) const = default;
};

std::string to_string(const IVId& id);

/// Deterministic, platform-independent stand-in for the map functions. Byte j
/// of value (q,n) is the low byte of a splitmix64-style avalanche chain over
/// the 64-bit words (seed, q, n, j), absorbed in that order. Identical on
/// every server and every run with the same seed.
class MapOracle {
 public:
  MapOracle(std::uint64_t seed, std::int64_t value_bits);

  BitString value(const IVId& id) const;

  std::uint64_t seed() const { return seed_; }
  std::int64_t value_bits() const { return value_bits_; }

 private:
  std::uint64_t seed_;
  std::int64_t value_bits_;
};

/// Per-server sets of intermediate values to map. Sorted and duplicate-free.
struct ComputationPlan {
  std::vector<std::vector<IVId>> per_server;  // index k-1

  std::int64_t total() const;
  bool contains(int server, const IVId& id) const;
};

/// One shuffle-phase broadcast (or unicast): equal-sized parts of the listed
/// values XOR-ed together.
struct PartRef {
  IVId value;
  int part_index = 0;  // which T/part_count slice
  int part_count = 1;
};

struct Transmission {
  int sender = 0;
  std::vector<int> audience;  // sorted, never contains sender
  std::vector<int> subset;    // the (r+1)-subset this exchange belongs to
  int split_size = 1;         // parts per value; 1 for unicast
  std::vector<PartRef> composition;
  BitString payload;

  std::int64_t bits() const { return static_cast<std::int64_t>(payload.bit_size()); }
};

/// A required side-information value was not in the sender's or a receiver's
/// computation plan: the plan cannot support the shuffle.
class MissingSideInformation : public std::runtime_error {
 public:
  MissingSideInformation(int server, const IVId& id);
  int server;
  IVId value;
};

/// S-CDC split plan does not sum to eta1*eta2 or has negative entries.
class PlanSizeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using IvStore = std::map<IVId, BitString>;

struct ShuffleResult {
  std::vector<Transmission> log;
  std::vector<IvStore> decoded;             // [K]: values decoded from the shuffle
  std::vector<std::vector<IVId>> computed;  // [K]: map-phase sets actually used
};

/// Integer S-CDC plan: weights[i] values of each exchange set are delivered
/// with split size i+1. Must sum to eta1*eta2.
struct SplitPlan {
  std::vector<std::int64_t> weights;  // index i -> split size i+1

  std::int64_t weight(int split_size) const;
  std::int64_t total() const;
};

/// The exchange set V_{S\{i}}^i: values needed by server i (functions of i,
/// files stored at every server of S\{i}). When |S| = r+1 these files are
/// exactly one batch, so the set has eta1*eta2 members.
std::vector<IVId> exchange_set(const Placement& placement, std::span<const int> subset,
                               int member);

/// The minimum map-phase plan that supports the CDC shuffle: server i maps its
/// own (function, stored-file) pairs plus, for every (r+1)-subset S containing
/// i, the exchange sets of the other members. All contributions are pairwise
/// disjoint, which is what makes the closed-form count exact.
ComputationPlan minimum_computation_plan(const Placement& placement);

/// CDC shuffle. For each (r+1)-subset: split each member's exchange set values
/// into r parts of T/r bits, associate parts with the other members in
/// ascending server order, and have every member broadcast eta1*eta2 XOR
/// payloads. Decodes at every audience member, bit-exactly.
ShuffleResult cdc_shuffle(const Placement& placement, const ComputationPlan& plan,
                          const MapOracle& oracle);

/// Split-CDC shuffle: per (r+1)-subset, rounds are served by CDC exchanges
/// restricted to sub-subsets of size split+1 (ascending server order), plus a
/// leftover group; a size-1 leftover is served by whole-value unicasts from
/// the lowest-indexed server of the subset that stores the needed files.
ShuffleResult scdc_shuffle(const Placement& placement, const SplitPlan& plan,
                           const MapOracle& oracle);

/// Replay a transmission log at every audience member, using only values in
/// that member's computed set as side information. Exposed separately so
/// fault-injection tests can drop transmissions from the log.
std::vector<IvStore> decode_transmissions(std::span<const Transmission> log,
                                          const Placement& placement,
                                          const std::vector<std::vector<IVId>>& computed,
                                          const MapOracle& oracle);

struct VerificationFailure {
  enum class Kind { Missing, Corrupted };
  int server = 0;
  IVId value;
  Kind kind = Kind::Missing;
};

struct VerificationReport {
  bool ok = false;
  std::vector<VerificationFailure> failures;
  /// Stand-in reduce outputs: XOR-fold of the N values of each function,
  /// indexed by function-1. Empty on failure.
  std::vector<BitString> function_checksums;
};

/// Check that every server holds all N values for each of its functions
/// (locally mapped or decoded) bit-identical to the oracle, then fold the
/// stand-in reduce checksums.
VerificationReport reduce_verify(const ShuffleResult& result, const Placement& placement,
                                 const MapOracle& oracle);

struct ServerLoad {
  std::int64_t sent_bits = 0;
  std::int64_t computed_values = 0;
};

struct LoadReport {
  Rational communication_load;       // total bits / (Q*N*T)
  std::int64_t computation_count = 0;  // sum of |C_k|
  std::int64_t total_bits = 0;
  std::int64_t transmissions = 0;
  std::vector<ServerLoad> per_server;
};

LoadReport measure_loads(std::span<const Transmission> log,
                         const std::vector<std::vector<IVId>>& computed,
                         const ValidatedConfig& cfg);

/// One JSON object per transmission: {sender, audience, subset, split_size,
/// composition, bits}; payload hex included only when requested.
nlohmann::ordered_json transmission_to_json(const Transmission& tx, bool include_payload);
std::string log_to_jsonl(std::span<const Transmission> log, bool include_payloads);

}  // namespace cdc
