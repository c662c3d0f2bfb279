#pragma once

#include <cstdint>
#include <vector>

namespace cdc {

/// Exact C(n,k); 0 when k > n. Throws std::overflow_error if the result does
/// not fit in 64 bits (far beyond the desk-scale clusters this targets).
std::uint64_t binomial(unsigned n, unsigned k);

/// All size-s subsets of the ground set [1:ground_size], each sorted
/// ascending, enumerated in lexicographic order of the sorted member lists.
/// The order is part of the contract: placement batches and shuffle logs are
/// reproducible byte-for-byte because of it.
std::vector<std::vector<int>> subsets_of_size(int ground_size, int s);

/// lcm(1, 2, ..., n). Used for the intermediate-value size invariant.
std::uint64_t lcm_up_to(unsigned n);

}  // namespace cdc
