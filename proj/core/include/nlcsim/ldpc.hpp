#pragma once

#include "nlcsim/types.hpp"

#include <string>

namespace nlcsim {

enum class DecodeStatus { kConverged, kMaxItersReached };

struct CodewordBlock {
    std::vector<uint8_t> bits;  // 64800 hard decisions
    std::vector<double> llrs;   // posterior LLRs, positive => bit 0
    DecodeStatus decode_status = DecodeStatus::kMaxItersReached;
    int iteration_count = 0;
};

/// Irregular repeat-accumulate code of the DVB-S.2 family: 64800-bit frames,
/// info bits connected to parity accumulators through per-group address
/// tables (360-bit groups, addresses offset by j*q within a group), staircase
/// parity part. Tables are loaded from plain-text data files, one bit-group
/// row per line listing accumulator addresses (0-based).
class LdpcCode {
public:
    static constexpr int kBlockLen = 64800;

    /// rate_num/rate_den must be 5/6 or 3/4.
    static LdpcCode load(int rate_num, int rate_den, const std::string& table_path);
    /// Locate the table file under the data directory (NLCSIM_DATA_DIR env
    /// var, compile-time default otherwise).
    static LdpcCode from_rate(int rate_num, int rate_den);

    int info_len() const { return info_len_; }
    int parity_len() const { return kBlockLen - info_len_; }
    double rate() const { return double(info_len_) / double(kBlockLen); }
    int rate_num() const { return rate_num_; }
    int rate_den() const { return rate_den_; }

    std::vector<uint8_t> encode(const std::vector<uint8_t>& info_bits) const;

    /// Belief-propagation decode. Scaled min-sum (factor 0.75) by default;
    /// full sum-product with sum_product = true. Converges early when the
    /// syndrome is zero; failure to converge is a status, not an error.
    CodewordBlock decode(const std::vector<double>& llrs, int max_iters = 10,
                         bool sum_product = false) const;

    bool check_parity(const std::vector<uint8_t>& codeword) const;

private:
    int rate_num_ = 0, rate_den_ = 0;
    int info_len_ = 0;
    int q_ = 0;
    std::vector<std::vector<int>> table_; // accumulator addresses per bit group

    // Check-node adjacency (CSR) over all 64800 variables, built at load.
    std::vector<int> chk_offset_;
    std::vector<int> chk_vars_;
    void build_adjacency();
};

} // namespace nlcsim
