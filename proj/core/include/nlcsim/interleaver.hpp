#pragma once

#include "nlcsim/types.hpp"

namespace nlcsim {

/// Row-column block interleaver spanning exactly one 64800-bit codeword.
/// Codeword bits are written row-major into `rows` rows and read column-major,
/// so a burst of consecutive symbol-domain bits spreads across the codeword.
/// rows = bits-per-symbol x 2 polarizations of the active constellation.
struct Interleaver {
    int rows = 12;
    int block_len = 64800;

    void validate() const;
    /// codeword order -> symbol order. Input length must be a multiple of
    /// block_len; each block is permuted independently.
    std::vector<uint8_t> interleave(const std::vector<uint8_t>& bits) const;
    std::vector<uint8_t> deinterleave(const std::vector<uint8_t>& bits) const;
    /// Permute per-bit values (LLRs) alongside the bits.
    std::vector<double> interleave_llrs(const std::vector<double>& llrs) const;
    std::vector<double> deinterleave_llrs(const std::vector<double>& llrs) const;
};

} // namespace nlcsim
