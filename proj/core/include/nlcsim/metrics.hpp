#pragma once

#include "nlcsim/types.hpp"

#include <optional>
#include <string>

namespace nlcsim {

struct SnrReport {
    // Mean-of-per-symbol-ratios estimator, as printed in the reference model.
    double mean_ratio_x_db = 0.0;
    double mean_ratio_y_db = 0.0;
    // Conventional ratio-of-sums estimator (used by acceptance checks).
    double ratio_sum_x_db = 0.0;
    double ratio_sum_y_db = 0.0;
    // Per-term clips applied in the mean-of-ratios form (zero-error symbols).
    std::size_t clipped_terms = 0;

    double ratio_sum_avg_db() const { return 0.5 * (ratio_sum_x_db + ratio_sum_y_db); }
    double mean_ratio_avg_db() const { return 0.5 * (mean_ratio_x_db + mean_ratio_y_db); }
};

/// Effective SNR between aligned frames; excludes guard symbols of both
/// frames. Per-term values above +60 dB are clipped and counted.
SnrReport snr_estimate(const SymbolFrame& rx, const SymbolFrame& truth);

struct BerResult {
    double ber = 0.0;
    std::size_t errors = 0;
    std::size_t bits = 0;
    double ci_low = 0.0;  // Wilson 95%
    double ci_high = 0.0;
};

BerResult ber_count(const std::vector<uint8_t>& decided,
                    const std::vector<uint8_t>& truth);

/// Q^2 [dB] = 20 log10(sqrt(2) erfcinv(2 ber)), defined for 0 < ber < 0.5.
double q2_from_ber(double ber);

/// Inverse complementary error function on (0, 2).
double erfc_inv(double y);

/// One result row of a simulation run. Serialized as a single
/// space-separated line with the exact field order below.
struct MetricRecord {
    double launch_power_dbm = 0.0;
    std::string scheme;
    int channel_index = 0;
    double snr_x_db = 0.0;
    double snr_y_db = 0.0;
    double snr_avg_db = 0.0;
    double pre_fec_ber = 0.0;
    double post_fec_ber = 0.0;
    double q2_db = 0.0;
    int iterations_used = 0;
    uint64_t seed = 0;
    uint64_t bit_count = 0;

    std::string to_line() const;
    static MetricRecord from_line(const std::string& line);
    static std::string header();
};

} // namespace nlcsim
