#include "cdc/config.hpp"

#include <sstream>

#include "cdc/combinatorics.hpp"

namespace cdc {

ConfigError::ConfigError(std::vector<std::string> violations)
    : std::runtime_error([&violations] {
        std::string joined = "invalid cluster config:";
        for (const auto& v : violations) {
          joined += "\n  " + v;
        }
        return joined;
      }()),
      violations_(std::move(violations)) {}

ValidatedConfig validate_config(const ClusterConfig& cfg) {
  std::vector<std::string> bad;

  if (cfg.server_count < 1) {
    bad.push_back("RangeError: server count K must be positive");
  }
  if (cfg.function_count < 1) {
    bad.push_back("RangeError: function count Q must be positive");
  }
  if (cfg.file_count < 1) {
    bad.push_back("RangeError: file count N must be positive");
  }
  if (cfg.value_bits < 1) {
    bad.push_back("RangeError: value size T must be positive");
  }
  if (cfg.files_per_batch < 1) {
    bad.push_back("RangeError: eta1 must be positive");
  }
  if (cfg.functions_per_server < 1) {
    bad.push_back("RangeError: eta2 must be positive");
  }
  if (cfg.redundancy < 1 || (cfg.server_count >= 1 && cfg.redundancy > cfg.server_count)) {
    std::ostringstream os;
    os << "RangeError: redundancy r=" << cfg.redundancy << " outside [1:" << cfg.server_count << "]";
    bad.push_back(os.str());
  }

  // Divisibility checks only make sense once the ranges are sane.
  if (cfg.server_count >= 1 && cfg.redundancy >= 1 && cfg.redundancy <= cfg.server_count) {
    const auto batches = binomial(static_cast<unsigned>(cfg.server_count),
                                  static_cast<unsigned>(cfg.redundancy));
    if (static_cast<std::uint64_t>(cfg.file_count) !=
        batches * static_cast<std::uint64_t>(cfg.files_per_batch)) {
      std::ostringstream os;
      os << "DivisibilityError: N=" << cfg.file_count << " != C(" << cfg.server_count << ","
         << cfg.redundancy << ")*eta1 = " << batches << "*" << cfg.files_per_batch;
      bad.push_back(os.str());
    }
    const std::uint64_t lcm = lcm_up_to(static_cast<unsigned>(cfg.redundancy));
    if (cfg.value_bits >= 1 && static_cast<std::uint64_t>(cfg.value_bits) % lcm != 0) {
      std::ostringstream os;
      os << "DivisibilityError: T=" << cfg.value_bits << " not divisible by lcm(1.." << cfg.redundancy
         << ") = " << lcm;
      bad.push_back(os.str());
    }
  }
  if (cfg.server_count >= 1 &&
      cfg.function_count != cfg.server_count * cfg.functions_per_server) {
    std::ostringstream os;
    os << "DivisibilityError: Q=" << cfg.function_count << " != K*eta2 = " << cfg.server_count << "*"
       << cfg.functions_per_server;
    bad.push_back(os.str());
  }

  if (!bad.empty()) {
    throw ConfigError(std::move(bad));
  }
  return ValidatedConfig(cfg);
}

ValidatedConfig derive_config(int server_count, int function_count, int file_count,
                              int redundancy, std::int64_t value_bits) {
  std::vector<std::string> bad;
  ClusterConfig cfg;
  cfg.server_count = server_count;
  cfg.function_count = function_count;
  cfg.file_count = file_count;
  cfg.redundancy = redundancy;

  if (server_count < 1 || redundancy < 1 || redundancy > server_count) {
    std::ostringstream os;
    os << "RangeError: redundancy r=" << redundancy << " outside [1:" << server_count << "]";
    throw ConfigError({os.str()});
  }

  const auto batches = binomial(static_cast<unsigned>(server_count),
                                static_cast<unsigned>(redundancy));
  if (file_count < 1 || static_cast<std::uint64_t>(file_count) % batches != 0) {
    std::ostringstream os;
    os << "DivisibilityError: C(" << server_count << "," << redundancy << ") = " << batches
       << " does not divide N = " << file_count;
    bad.push_back(os.str());
  } else {
    cfg.files_per_batch = static_cast<int>(static_cast<std::uint64_t>(file_count) / batches);
  }
  if (function_count < 1 || function_count % server_count != 0) {
    std::ostringstream os;
    os << "DivisibilityError: K = " << server_count << " does not divide Q = " << function_count;
    bad.push_back(os.str());
  } else {
    cfg.functions_per_server = function_count / server_count;
  }
  if (!bad.empty()) {
    throw ConfigError(std::move(bad));
  }

  cfg.value_bits =
      value_bits != 0 ? value_bits
                      : static_cast<std::int64_t>(lcm_up_to(static_cast<unsigned>(redundancy)));
  return validate_config(cfg);
}

}  // namespace cdc
