#include "cdc/placement.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "cdc/combinatorics.hpp"

namespace cdc {

std::vector<std::vector<int>> assign_functions(const ValidatedConfig& cfg) {
  const int k_count = cfg.server_count();
  std::vector<std::vector<int>> out(static_cast<std::size_t>(k_count));
  for (int k = 1; k <= k_count; ++k) {
    auto& w = out[static_cast<std::size_t>(k - 1)];
    w.reserve(static_cast<std::size_t>(cfg.functions_per_server()));
    for (int j = 0; j < cfg.functions_per_server(); ++j) {
      w.push_back(k + j * k_count);
    }
  }
  return out;
}

Placement place_files(const ValidatedConfig& cfg) {
  Placement p(cfg);
  p.subsets_ = subsets_of_size(cfg.server_count(), cfg.redundancy());
  p.server_functions_ = assign_functions(cfg);

  p.server_files_.assign(static_cast<std::size_t>(cfg.server_count()), {});
  p.has_file_.assign(static_cast<std::size_t>(cfg.server_count()),
                     std::vector<bool>(static_cast<std::size_t>(cfg.file_count()), false));

  const int eta1 = cfg.files_per_batch();
  for (std::size_t b = 0; b < p.subsets_.size(); ++b) {
    const int first = static_cast<int>(b) * eta1 + 1;
    for (const int server : p.subsets_[b]) {
      auto& files = p.server_files_[static_cast<std::size_t>(server - 1)];
      for (int f = first; f < first + eta1; ++f) {
        files.push_back(f);
        p.has_file_[static_cast<std::size_t>(server - 1)][static_cast<std::size_t>(f - 1)] = true;
      }
    }
  }
  for (auto& files : p.server_files_) {
    std::sort(files.begin(), files.end());
  }
  return p;
}

std::vector<int> Placement::batch_files(int batch_index) const {
  const int eta1 = cfg_.files_per_batch();
  std::vector<int> out(static_cast<std::size_t>(eta1));
  for (int j = 0; j < eta1; ++j) {
    out[static_cast<std::size_t>(j)] = batch_index * eta1 + j + 1;
  }
  return out;
}

const std::vector<int>& Placement::server_files(int server) const {
  return server_files_.at(static_cast<std::size_t>(server - 1));
}

const std::vector<int>& Placement::server_functions(int server) const {
  return server_functions_.at(static_cast<std::size_t>(server - 1));
}

bool Placement::server_has_file(int server, int file) const {
  return has_file_.at(static_cast<std::size_t>(server - 1)).at(static_cast<std::size_t>(file - 1));
}

int Placement::batch_index_of_file(int file) const {
  if (file < 1 || file > cfg_.file_count()) {
    throw std::out_of_range("batch_index_of_file");
  }
  return (file - 1) / cfg_.files_per_batch();
}

const std::vector<int>& Placement::file_owners(int file) const {
  return subsets_.at(static_cast<std::size_t>(batch_index_of_file(file)));
}

int Placement::function_owner(int function) const {
  if (function < 1 || function > cfg_.function_count()) {
    throw std::out_of_range("function_owner");
  }
  return (function - 1) % cfg_.server_count() + 1;
}

nlohmann::ordered_json Placement::to_json() const {
  nlohmann::ordered_json batches = nlohmann::ordered_json::object();
  for (std::size_t b = 0; b < subsets_.size(); ++b) {
    std::string key;
    for (std::size_t i = 0; i < subsets_[b].size(); ++i) {
      if (i > 0) {
        key += ",";
      }
      key += std::to_string(subsets_[b][i]);
    }
    batches[key] = batch_files(static_cast<int>(b));
  }

  nlohmann::ordered_json files = nlohmann::ordered_json::object();
  nlohmann::ordered_json functions = nlohmann::ordered_json::object();
  for (int k = 1; k <= cfg_.server_count(); ++k) {
    files[std::to_string(k)] = server_files(k);
    functions[std::to_string(k)] = server_functions(k);
  }

  return nlohmann::ordered_json{
      {"batches", batches}, {"server_files", files}, {"server_functions", functions}};
}

}  // namespace cdc
