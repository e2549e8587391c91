#pragma once

#include "nlcsim/channel.hpp"
#include "nlcsim/types.hpp"

#include <functional>

namespace nlcsim {

/// Single-channel digital backpropagation: symmetric split-step inverse
/// Manakov propagation, span by span in reverse order.
struct DbpConfig {
    double step_km = 1.0;
    double alpha_db_km = 0.2;
    double gamma = 1.3e-3;        // 1/(W m)
    double dispersion_D = 17.0;   // ps/(nm km)
    double ref_wavelength_nm = 1550.0;
    int span_count = 20;
    double span_length_km = 80.0;
    /// Mean signal power at the span input assumed by the nonlinear operator
    /// (the receiver normalizes its input; launch power is configured).
    double launch_power_w = 1e-3;

    void validate() const;
};

DualPolWaveform dbp_backpropagate(const DualPolWaveform& rx, const DbpConfig& cfg);

/// Grid search over candidate configs maximizing the received SNR measured
/// by the supplied scorer (typically ratio-of-sums SNR against truth).
struct DbpTuneResult {
    DbpConfig best;
    double best_snr_db = -1e300;
};
DbpTuneResult dbp_tune(const DualPolWaveform& rx, const std::vector<DbpConfig>& grid,
                       const std::function<double(const DualPolWaveform&)>& scorer);

} // namespace nlcsim
