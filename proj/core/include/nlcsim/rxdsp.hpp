#pragma once

#include "nlcsim/qam.hpp"
#include "nlcsim/types.hpp"

namespace nlcsim {

struct CdcSpec {
    double total_dispersion_ps_nm = 0.0; // accumulated D x length
    double ref_wavelength_nm = 1550.0;

    /// beta2 x length in s^2, derived from the accumulated dispersion.
    double beta2_total() const;
};

/// Frequency-domain chromatic dispersion compensation. All-pass, so energy
/// is preserved exactly.
DualPolWaveform cdc_compensate(const DualPolWaveform& input, const CdcSpec& spec);

/// Apply the accumulated dispersion (forward direction); the exact inverse
/// of cdc_compensate.
DualPolWaveform apply_dispersion(const DualPolWaveform& input, const CdcSpec& spec);

/// T/2-spaced 2x2 MMSE butterfly trained by regularized block least squares
/// on a pilot prefix.
struct MmseEqualizer {
    int num_taps = 24;
    // taps[out_pol][in_pol], each num_taps long, T/2-spaced
    std::array<std::array<cvec, 2>, 2> taps;
    bool trained = false;
    double training_mse = 0.0;
    bool regularized_warning = false;
    int sample_offset = 0; // input sample index corresponding to symbol 0
};

/// rx must be at 2 samples/symbol. pilots are the first pilot_len symbols of
/// the (aligned) transmitted frame; pilot_len >= 10 x num_taps.
MmseEqualizer mmse_train(const DualPolWaveform& rx, const SymbolFrame& pilots,
                         std::size_t pilot_len, int num_taps);

/// Equalize to 1 sample/symbol, delay-aligned to the transmitted frame.
SymbolFrame mmse_apply(const MmseEqualizer& eq, const DualPolWaveform& rx);

/// Integer symbol alignment between a frame and a reference, found by
/// cross-correlation peak over circular shifts. Returns the shift that maps
/// rx index k to reference index k (apply with circular_shift).
int find_alignment(const cvec& rx, const cvec& ref, int max_abs_shift);

SymbolFrame circular_shift(const SymbolFrame& f, int shift);

/// First-order decision-directed PLL. loop_bw is the per-symbol gain.
SymbolFrame ddpll_carrier_recovery(const SymbolFrame& frame, const QamConstellation& c,
                                   double loop_bw);

/// Decimate a waveform at an integer samples-per-symbol to 1 sample/symbol
/// starting at `phase`.
SymbolFrame decimate_to_symbols(const DualPolWaveform& w, double symbol_rate,
                                std::size_t phase = 0);

} // namespace nlcsim
