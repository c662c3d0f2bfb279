#include "cdc/simulator.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

#include "cdc/combinatorics.hpp"

namespace cdc {

namespace {

// splitmix64 finalizer; the chain below absorbs one 64-bit word per step.
std::uint64_t avalanche(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

std::uint64_t absorb(std::uint64_t state, std::uint64_t word) {
  return avalanche(state ^ word);
}

// Position of `member` within subset \ {excluded}; subset is sorted, so this
// is the part index associated with `member` for values destined to
// `excluded`.
int part_position(std::span<const int> subset, int excluded, int member) {
  int pos = 0;
  for (const int s : subset) {
    if (s == excluded) {
      continue;
    }
    if (s == member) {
      return pos;
    }
    ++pos;
  }
  throw std::logic_error("part_position: member not in subset");
}

std::vector<int> without(std::span<const int> subset, int excluded) {
  std::vector<int> out;
  out.reserve(subset.size() - 1);
  for (const int s : subset) {
    if (s != excluded) {
      out.push_back(s);
    }
  }
  return out;
}

std::vector<std::vector<int>> subsets_of_size_or_empty(int ground, int s) {
  if (s > ground) {
    return {};
  }
  return subsets_of_size(ground, s);
}

}  // namespace

std::string to_string(const IVId& id) {
  std::ostringstream os;
  os << "v(" << id.function << "," << id.file << ")";
  return os.str();
}

MapOracle::MapOracle(std::uint64_t seed, std::int64_t value_bits)
    : seed_(seed), value_bits_(value_bits) {
  if (value_bits < 1) {
    throw std::invalid_argument("MapOracle: value size must be positive");
  }
}

BitString MapOracle::value(const IVId& id) const {
  BitString out(static_cast<std::size_t>(value_bits_));
  const std::uint64_t base =
      absorb(absorb(absorb(0x9E3779B97F4A7C15ULL, seed_), static_cast<std::uint64_t>(id.function)),
             static_cast<std::uint64_t>(id.file));
  const std::size_t byte_count = (static_cast<std::size_t>(value_bits_) + 7) / 8;
  for (std::size_t j = 0; j < byte_count; ++j) {
    out.set_byte(j, static_cast<std::uint8_t>(absorb(base, j) & 0xFF));
  }
  return out;
}

std::int64_t ComputationPlan::total() const {
  std::int64_t sum = 0;
  for (const auto& s : per_server) {
    sum += static_cast<std::int64_t>(s.size());
  }
  return sum;
}

bool ComputationPlan::contains(int server, const IVId& id) const {
  const auto& s = per_server.at(static_cast<std::size_t>(server - 1));
  return std::binary_search(s.begin(), s.end(), id);
}

MissingSideInformation::MissingSideInformation(int server_, const IVId& id)
    : std::runtime_error("server " + std::to_string(server_) + " has not computed " +
                         to_string(id)),
      server(server_),
      value(id) {}

std::int64_t SplitPlan::weight(int split_size) const {
  if (split_size < 1 || static_cast<std::size_t>(split_size) > weights.size()) {
    return 0;
  }
  return weights[static_cast<std::size_t>(split_size - 1)];
}

std::int64_t SplitPlan::total() const {
  std::int64_t sum = 0;
  for (const auto w : weights) {
    sum += w;
  }
  return sum;
}

std::vector<IVId> exchange_set(const Placement& placement, std::span<const int> subset,
                               int member) {
  if (subset.size() < 2) {
    throw std::invalid_argument("exchange_set: subset needs at least 2 members");
  }
  const std::vector<int> others = without(subset, member);
  if (others.size() == subset.size()) {
    throw std::invalid_argument("exchange_set: member not in subset");
  }

  // Files stored at every server of subset \ {member}: the batches whose
  // owner subsets are supersets of it.
  std::vector<int> files;
  const auto& owners = placement.batch_subsets();
  for (std::size_t b = 0; b < owners.size(); ++b) {
    if (std::includes(owners[b].begin(), owners[b].end(), others.begin(), others.end())) {
      for (const int f : placement.batch_files(static_cast<int>(b))) {
        files.push_back(f);
      }
    }
  }

  std::vector<IVId> out;
  out.reserve(placement.server_functions(member).size() * files.size());
  for (const int q : placement.server_functions(member)) {
    for (const int n : files) {
      out.push_back({q, n});
    }
  }
  return out;  // sorted by (function, file): W_k ascending, batch files ascending
}

ComputationPlan minimum_computation_plan(const Placement& placement) {
  const auto& cfg = placement.config();
  const int k_count = cfg.server_count();

  ComputationPlan plan;
  plan.per_server.assign(static_cast<std::size_t>(k_count), {});

  for (int k = 1; k <= k_count; ++k) {
    auto& mine = plan.per_server[static_cast<std::size_t>(k - 1)];
    for (const int q : placement.server_functions(k)) {
      for (const int n : placement.server_files(k)) {
        mine.push_back({q, n});
      }
    }
  }

  const auto subsets = subsets_of_size_or_empty(k_count, cfg.redundancy() + 1);
  for (const auto& subset : subsets) {
    for (const int k : subset) {
      const auto values = exchange_set(placement, subset, k);
      for (const int i : subset) {
        if (i == k) {
          continue;
        }
        auto& plan_i = plan.per_server[static_cast<std::size_t>(i - 1)];
        plan_i.insert(plan_i.end(), values.begin(), values.end());
      }
    }
  }

  for (auto& s : plan.per_server) {
    std::sort(s.begin(), s.end());
    // Contributions are pairwise disjoint by construction; dedupe anyway so
    // contains() stays correct even if a caller merges plans.
    s.erase(std::unique(s.begin(), s.end()), s.end());
  }
  return plan;
}

namespace {

// Emit the CDC exchange for one group: every member broadcasts, per round,
// the XOR of the parts (one per other member) associated with it. `values`
// maps each member to its exchange set for the enclosing (r+1)-subset.
void emit_group_exchange(const std::vector<int>& group, std::span<const int> enclosing,
                         const std::map<int, std::vector<IVId>>& values, std::int64_t round_begin,
                         std::int64_t round_end, const MapOracle& oracle,
                         const ComputationPlan* plan_to_check,
                         std::vector<std::set<IVId>>* computed_to_fill,
                         std::vector<Transmission>& log) {
  const int parts = static_cast<int>(group.size()) - 1;
  const std::int64_t part_bits = oracle.value_bits() / parts;

  for (std::int64_t m = round_begin; m < round_end; ++m) {
    for (const int sender : group) {
      Transmission tx;
      tx.sender = sender;
      tx.audience = without(group, sender);
      tx.subset.assign(enclosing.begin(), enclosing.end());
      tx.split_size = parts;
      tx.payload = BitString(static_cast<std::size_t>(part_bits));
      for (const int receiver : group) {
        if (receiver == sender) {
          continue;
        }
        const IVId v = values.at(receiver)[static_cast<std::size_t>(m)];
        if (plan_to_check != nullptr && !plan_to_check->contains(sender, v)) {
          throw MissingSideInformation(sender, v);
        }
        if (computed_to_fill != nullptr) {
          (*computed_to_fill)[static_cast<std::size_t>(sender - 1)].insert(v);
        }
        const int part = part_position(group, receiver, sender);
        tx.payload.xor_with(oracle.value(v).slice(
            static_cast<std::size_t>(part) * static_cast<std::size_t>(part_bits),
            static_cast<std::size_t>(part_bits)));
        tx.composition.push_back({v, part, parts});
      }
      log.push_back(std::move(tx));
    }
  }
}

}  // namespace

ShuffleResult cdc_shuffle(const Placement& placement, const ComputationPlan& plan,
                          const MapOracle& oracle) {
  const auto& cfg = placement.config();
  if (oracle.value_bits() != cfg.value_bits()) {
    throw std::invalid_argument("cdc_shuffle: oracle size does not match config");
  }

  ShuffleResult result;
  result.computed = plan.per_server;

  const auto subsets = subsets_of_size_or_empty(cfg.server_count(), cfg.redundancy() + 1);
  for (const auto& subset : subsets) {
    std::map<int, std::vector<IVId>> values;
    for (const int i : subset) {
      values[i] = exchange_set(placement, subset, i);
    }
    emit_group_exchange(subset, subset, values, 0, cfg.rounds_per_subset(), oracle, &plan,
                        nullptr, result.log);
  }

  result.decoded = decode_transmissions(result.log, placement, result.computed, oracle);
  return result;
}

ShuffleResult scdc_shuffle(const Placement& placement, const SplitPlan& plan,
                           const MapOracle& oracle) {
  const auto& cfg = placement.config();
  if (oracle.value_bits() != cfg.value_bits()) {
    throw std::invalid_argument("scdc_shuffle: oracle size does not match config");
  }
  const int r = cfg.redundancy();
  for (const auto w : plan.weights) {
    if (w < 0) {
      throw PlanSizeError("split plan has a negative weight");
    }
  }
  for (std::size_t i = static_cast<std::size_t>(r); i < plan.weights.size(); ++i) {
    if (plan.weights[i] != 0) {
      throw PlanSizeError("split plan uses a split size larger than r");
    }
  }
  if (plan.total() != cfg.rounds_per_subset()) {
    throw PlanSizeError("split plan weights must sum to eta1*eta2 = " +
                        std::to_string(cfg.rounds_per_subset()));
  }

  // Servers always map their own (function, stored file) pairs; shuffle side
  // information is added below as the exchanges are laid out.
  std::vector<std::set<IVId>> computed(static_cast<std::size_t>(cfg.server_count()));
  for (int k = 1; k <= cfg.server_count(); ++k) {
    auto& mine = computed[static_cast<std::size_t>(k - 1)];
    for (const int q : placement.server_functions(k)) {
      for (const int n : placement.server_files(k)) {
        mine.insert({q, n});
      }
    }
  }

  ShuffleResult result;
  const auto subsets = subsets_of_size_or_empty(cfg.server_count(), r + 1);
  for (const auto& subset : subsets) {
    std::map<int, std::vector<IVId>> values;
    for (const int i : subset) {
      values[i] = exchange_set(placement, subset, i);
    }

    std::int64_t round_base = 0;
    for (int split = 1; split <= r; ++split) {
      const std::int64_t z = plan.weight(split);
      if (z == 0) {
        continue;
      }
      const std::int64_t round_end = round_base + z;
      const int group_size = split + 1;
      const int group_count = (r + 1) / group_size;
      const int leftover_size = (r + 1) - group_count * group_size;

      for (int g = 0; g < group_count; ++g) {
        const std::vector<int> group(subset.begin() + g * group_size,
                                     subset.begin() + (g + 1) * group_size);
        emit_group_exchange(group, subset, values, round_base, round_end, oracle, nullptr,
                            &computed, result.log);
      }

      if (leftover_size >= 2) {
        const std::vector<int> group(subset.end() - leftover_size, subset.end());
        emit_group_exchange(group, subset, values, round_base, round_end, oracle, nullptr,
                            &computed, result.log);
      } else if (leftover_size == 1) {
        // A lone server cannot join an exchange; its values are unicast whole
        // by the lowest-indexed member of the subset that stores the file.
        const int lone = subset.back();
        for (std::int64_t m = round_base; m < round_end; ++m) {
          const IVId v = values.at(lone)[static_cast<std::size_t>(m)];
          int sender = 0;
          for (const int s : subset) {
            if (s != lone && placement.server_has_file(s, v.file)) {
              sender = s;
              break;
            }
          }
          if (sender == 0) {
            throw std::logic_error("scdc_shuffle: no storer for unicast value");
          }
          computed[static_cast<std::size_t>(sender - 1)].insert(v);
          Transmission tx;
          tx.sender = sender;
          tx.audience = {lone};
          tx.subset = subset;
          tx.split_size = 1;
          tx.composition.push_back({v, 0, 1});
          tx.payload = oracle.value(v);
          result.log.push_back(std::move(tx));
        }
      }
      round_base = round_end;
    }
  }

  result.computed.reserve(computed.size());
  for (const auto& s : computed) {
    result.computed.emplace_back(s.begin(), s.end());
  }
  result.decoded = decode_transmissions(result.log, placement, result.computed, oracle);
  return result;
}

std::vector<IvStore> decode_transmissions(std::span<const Transmission> log,
                                          const Placement& placement,
                                          const std::vector<std::vector<IVId>>& computed,
                                          const MapOracle& oracle) {
  const auto& cfg = placement.config();
  const std::int64_t t_bits = cfg.value_bits();

  const auto has_computed = [&computed](int server, const IVId& id) {
    const auto& s = computed.at(static_cast<std::size_t>(server - 1));
    return std::binary_search(s.begin(), s.end(), id);
  };

  struct Partial {
    int part_count = 0;
    int received = 0;
    std::vector<bool> have;
    BitString buffer;
  };
  std::vector<std::map<IVId, Partial>> partial(static_cast<std::size_t>(cfg.server_count()));
  std::vector<IvStore> stores(static_cast<std::size_t>(cfg.server_count()));

  for (const auto& tx : log) {
    for (const int a : tx.audience) {
      // The one composition entry whose function belongs to this receiver is
      // its payload; every other part is removed with locally computed side
      // information.
      const PartRef* target = nullptr;
      for (const auto& entry : tx.composition) {
        if (placement.function_owner(entry.value.function) == a) {
          target = &entry;
          break;
        }
      }
      if (target == nullptr) {
        continue;
      }
      BitString scratch = tx.payload;
      for (const auto& entry : tx.composition) {
        if (&entry == target) {
          continue;
        }
        if (!has_computed(a, entry.value)) {
          throw MissingSideInformation(a, entry.value);
        }
        const std::int64_t pb = t_bits / entry.part_count;
        scratch.xor_with(oracle.value(entry.value).slice(
            static_cast<std::size_t>(entry.part_index) * static_cast<std::size_t>(pb),
            static_cast<std::size_t>(pb)));
      }

      auto& p = partial[static_cast<std::size_t>(a - 1)][target->value];
      if (p.part_count == 0) {
        p.part_count = target->part_count;
        p.have.assign(static_cast<std::size_t>(target->part_count), false);
        p.buffer = BitString(static_cast<std::size_t>(t_bits));
      }
      const std::int64_t pb = t_bits / target->part_count;
      if (!p.have[static_cast<std::size_t>(target->part_index)]) {
        p.have[static_cast<std::size_t>(target->part_index)] = true;
        ++p.received;
      }
      p.buffer.overwrite(static_cast<std::size_t>(target->part_index) * static_cast<std::size_t>(pb),
                         scratch);
      if (p.received == p.part_count) {
        stores[static_cast<std::size_t>(a - 1)][target->value] = p.buffer;
      }
    }
  }
  return stores;
}

VerificationReport reduce_verify(const ShuffleResult& result, const Placement& placement,
                                 const MapOracle& oracle) {
  const auto& cfg = placement.config();
  VerificationReport report;
  report.function_checksums.assign(static_cast<std::size_t>(cfg.function_count()),
                                   BitString(static_cast<std::size_t>(cfg.value_bits())));

  const auto in_plan = [&result](int server, const IVId& id) {
    const auto& s = result.computed.at(static_cast<std::size_t>(server - 1));
    return std::binary_search(s.begin(), s.end(), id);
  };

  for (int k = 1; k <= cfg.server_count(); ++k) {
    const auto& decoded = result.decoded.at(static_cast<std::size_t>(k - 1));
    for (const int q : placement.server_functions(k)) {
      auto& checksum = report.function_checksums[static_cast<std::size_t>(q - 1)];
      for (int n = 1; n <= cfg.file_count(); ++n) {
        const IVId id{q, n};
        const BitString expected = oracle.value(id);
        if (placement.server_has_file(k, n) && in_plan(k, id)) {
          checksum.xor_with(expected);  // locally mapped
          continue;
        }
        const auto it = decoded.find(id);
        if (it == decoded.end()) {
          report.failures.push_back({k, id, VerificationFailure::Kind::Missing});
          continue;
        }
        if (it->second != expected) {
          report.failures.push_back({k, id, VerificationFailure::Kind::Corrupted});
          continue;
        }
        checksum.xor_with(it->second);
      }
    }
  }

  report.ok = report.failures.empty();
  if (!report.ok) {
    report.function_checksums.clear();
  }
  return report;
}

LoadReport measure_loads(std::span<const Transmission> log,
                         const std::vector<std::vector<IVId>>& computed,
                         const ValidatedConfig& cfg) {
  LoadReport report;
  report.per_server.assign(static_cast<std::size_t>(cfg.server_count()), {});

  for (const auto& tx : log) {
    report.total_bits += tx.bits();
    report.per_server.at(static_cast<std::size_t>(tx.sender - 1)).sent_bits += tx.bits();
  }
  report.transmissions = static_cast<std::int64_t>(log.size());

  for (std::size_t k = 0; k < computed.size(); ++k) {
    const auto count = static_cast<std::int64_t>(computed[k].size());
    report.per_server.at(k).computed_values = count;
    report.computation_count += count;
  }

  const Integer qnt = Integer(cfg.total_values()) * cfg.value_bits();
  report.communication_load = Rational(Integer(report.total_bits), qnt);
  return report;
}

nlohmann::ordered_json transmission_to_json(const Transmission& tx, bool include_payload) {
  nlohmann::ordered_json composition = nlohmann::ordered_json::array();
  for (const auto& entry : tx.composition) {
    composition.push_back({{"function", entry.value.function},
                           {"file", entry.value.file},
                           {"part", entry.part_index},
                           {"parts", entry.part_count}});
  }
  nlohmann::ordered_json j{{"sender", tx.sender}, {"audience", tx.audience},
                           {"subset", tx.subset}, {"split_size", tx.split_size},
                           {"composition", composition}, {"bits", tx.bits()}};
  if (include_payload) {
    j["payload"] = tx.payload.to_hex();
  }
  return j;
}

std::string log_to_jsonl(std::span<const Transmission> log, bool include_payloads) {
  std::string out;
  for (const auto& tx : log) {
    out += transmission_to_json(tx, include_payloads).dump();
    out += "\n";
  }
  return out;
}

}  // namespace cdc
