#include "cdc/combinatorics.hpp"

#include <numeric>
#include <stdexcept>

namespace cdc {

std::uint64_t binomial(unsigned n, unsigned k) {
  if (k > n) {
    return 0;
  }
  if (k > n - k) {
    k = n - k;
  }
  // C(n,i) = C(n,i-1) * (n-i+1) / i, exact at every step.
  unsigned __int128 acc = 1;
  for (unsigned i = 1; i <= k; ++i) {
    acc = acc * (n - i + 1) / i;
    if (acc > static_cast<unsigned __int128>(UINT64_MAX)) {
      throw std::overflow_error("binomial: result exceeds 64 bits");
    }
  }
  return static_cast<std::uint64_t>(acc);
}

std::vector<std::vector<int>> subsets_of_size(int ground_size, int s) {
  if (s < 0 || s > ground_size) {
    throw std::out_of_range("subsets_of_size: size outside [0:ground]");
  }
  std::vector<std::vector<int>> out;
  out.reserve(binomial(static_cast<unsigned>(ground_size), static_cast<unsigned>(s)));

  std::vector<int> cur(static_cast<std::size_t>(s));
  for (int i = 0; i < s; ++i) {
    cur[static_cast<std::size_t>(i)] = i + 1;
  }
  while (true) {
    out.push_back(cur);
    // Advance to the next combination in lexicographic order.
    int i = s - 1;
    while (i >= 0 && cur[static_cast<std::size_t>(i)] == ground_size - (s - 1 - i)) {
      --i;
    }
    if (i < 0) {
      break;
    }
    ++cur[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < s; ++j) {
      cur[static_cast<std::size_t>(j)] = cur[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
  return out;
}

std::uint64_t lcm_up_to(unsigned n) {
  std::uint64_t acc = 1;
  for (unsigned i = 2; i <= n; ++i) {
    acc = std::lcm(acc, static_cast<std::uint64_t>(i));
  }
  return acc;
}

}  // namespace cdc
