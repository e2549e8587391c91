#pragma once

#include "nlcsim/types.hpp"

namespace nlcsim {

struct RrcFilterSpec {
    double rolloff = 0.005;      // in (0, 1]
    int num_taps = 401;          // odd
    int samples_per_symbol = 16; // >= 2

    void validate() const;
};

/// Unit-energy, symmetric root-raised-cosine taps. Singular points (t = 0,
/// t = +-Ts/(4 beta)) use the analytic limits.
std::vector<double> rrc_taps(const RrcFilterSpec& spec);

/// Upsample a symbol frame to spec.samples_per_symbol and pulse shape.
/// Output mean power equals the frame mean symbol power (edge transients
/// excluded); sample_rate = symbol_rate * samples_per_symbol.
DualPolWaveform shape_pulses(const SymbolFrame& frame, const RrcFilterSpec& spec);

/// Apply the matched RRC filter at the waveform's own rate (which must be an
/// integer multiple of the symbol rate).
DualPolWaveform matched_filter(const DualPolWaveform& w, double symbol_rate,
                               double rolloff, int num_taps_per_symbol = 32);

/// Peak instantaneous power of an isolated unit-energy symbol pulse relative
/// to the mean power of a unit-power symbol stream (used as the P0 reference).
double pulse_peak_factor(const RrcFilterSpec& spec);

} // namespace nlcsim
