#pragma once

#include "nlcsim/rng.hpp"
#include "nlcsim/types.hpp"

namespace nlcsim {

constexpr double kPlanck = 6.62607015e-34;     // J s
constexpr double kLightSpeed = 299792458.0;    // m/s
constexpr double kRefWavelength = 1550e-9;     // m

struct FiberParams {
    double alpha_db_km = 0.2;       // attenuation
    double gamma = 1.3e-3;          // 1/(W m)
    double dispersion_D = 17.0;     // ps/(nm km)
    double length_km = 80.0;
    double ref_wavelength_nm = 1550.0;

    /// beta2 in s^2/m, derived as -D lambda^2 / (2 pi c).
    double beta2() const;
    /// Power attenuation in nepers per meter.
    double alpha_np_m() const;
    double span_loss_db() const { return alpha_db_km * length_km; }
    void validate() const;
};

struct LinkConfig {
    std::vector<FiberParams> spans;
    double edfa_noise_figure_db = 4.5;
    double launch_power_dbm_per_channel = 0.0;
    double ssfm_step_m = 100.0;
    uint64_t rng_seed = 1;

    void validate() const;
    double total_length_km() const;
    double total_dispersion_ps_nm() const; // accumulated D x length
    /// Uniform-link helper: n identical spans.
    static LinkConfig uniform(int span_count, const FiberParams& fiber);
};

/// One span of symmetric split-step Manakov propagation: dispersion+loss in
/// the frequency domain, 8/9-scaled Kerr phase rotation with the per-step
/// effective length in the time domain.
DualPolWaveform ssfm_propagate_span(const DualPolWaveform& input,
                                    const FiberParams& fiber, double step_m);

/// Flat-gain amplifier with additive circular Gaussian ASE per polarization:
/// PSD rho = (G-1) F h nu / 2, noise power rho x sample_rate.
DualPolWaveform edfa(const DualPolWaveform& input, double gain_db,
                     double noise_figure_db, RandomStream& rng);

/// Span/EDFA alternation over the whole link; per-span gain equals span loss
/// exactly. Deterministic given link.rng_seed.
DualPolWaveform propagate_link(const DualPolWaveform& input, const LinkConfig& link);

} // namespace nlcsim
