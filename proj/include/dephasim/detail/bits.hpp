// bits.hpp — configuration-index bit arithmetic

#pragma once

#include <bit>
#include <cstdint>

namespace dephasim::detail {

// Inserts a zero bit above every bit of the low 32 bits of x.
inline std::uint64_t spread_bits(std::uint64_t x) {
    x &= 0xFFFFFFFFULL;
    x = (x | (x << 16)) & 0x0000FFFF0000FFFFULL;
    x = (x | (x << 8)) & 0x00FF00FF00FF00FFULL;
    x = (x | (x << 4)) & 0x0F0F0F0F0F0F0F0FULL;
    x = (x | (x << 2)) & 0x3333333333333333ULL;
    x = (x | (x << 1)) & 0x5555555555555555ULL;
    return x;
}

// Keeps every second bit of x (starting at bit 0) and packs them down.
inline std::uint64_t compact_bits(std::uint64_t x) {
    x &= 0x5555555555555555ULL;
    x = (x | (x >> 1)) & 0x3333333333333333ULL;
    x = (x | (x >> 2)) & 0x0F0F0F0F0F0F0F0FULL;
    x = (x | (x >> 4)) & 0x00FF00FF00FF00FFULL;
    x = (x | (x >> 8)) & 0x0000FFFF0000FFFFULL;
    x = (x | (x >> 16)) & 0x00000000FFFFFFFFULL;
    return x;
}

// Flat tensor address of a coefficient: per qubit two adjacent bits,
// i-label above j-label, qubit 1 most significant.
inline std::uint64_t pair_index(std::uint64_t i, std::uint64_t j) {
    return (spread_bits(i) << 1) | spread_bits(j);
}

inline std::uint64_t pair_row(std::uint64_t flat) { return compact_bits(flat >> 1); }
inline std::uint64_t pair_col(std::uint64_t flat) { return compact_bits(flat); }

// Sum of labels of a configuration index: label +1 per set bit, -1 per
// cleared bit among the low num_qubits bits.
inline int label_sum(std::uint64_t index, int num_qubits) {
    return 2 * std::popcount(index) - num_qubits;
}

inline std::uint64_t index_mask(int num_qubits) {
    return num_qubits >= 64 ? ~0ULL : ((1ULL << num_qubits) - 1);
}

} // namespace dephasim::detail
