#include "nlcsim/dbp.hpp"

#include "nlcsim/fft.hpp"

#include <cmath>

namespace nlcsim {

void DbpConfig::validate() const {
    if (!(step_km > 0.0)) throw ParameterError("dbp: step must be positive");
    if (span_count < 0 || !(span_length_km > 0.0))
        throw ParameterError("dbp: invalid span layout");
    if (!std::isfinite(alpha_db_km) || !std::isfinite(gamma) ||
        !std::isfinite(dispersion_D))
        throw ParameterError("dbp: parameters must be finite");
    if (step_km > span_length_km) throw ParameterError("dbp: step larger than span");
}

DualPolWaveform dbp_backpropagate(const DualPolWaveform& rx, const DbpConfig& cfg) {
    cfg.validate();
    FiberParams fiber;
    fiber.alpha_db_km = cfg.alpha_db_km;
    fiber.gamma = cfg.gamma;
    fiber.dispersion_D = cfg.dispersion_D;
    fiber.length_km = cfg.span_length_km;
    fiber.ref_wavelength_nm = cfg.ref_wavelength_nm;
    const double beta2 = fiber.beta2();
    const double alpha = fiber.alpha_np_m();
    const double gamma_eff = (8.0 / 9.0) * cfg.gamma;
    const double span_m = cfg.span_length_km * 1000.0;
    const double step_m = cfg.step_km * 1000.0;
    const double gain_amp = std::exp(0.5 * alpha * span_m); // per-span EDFA (field)

    DualPolWaveform w = rx;
    const double pin = w.mean_power();
    if (!(pin > 0.0)) throw ParameterError("dbp: input has no power");
    const double to_launch = std::sqrt(cfg.launch_power_w / pin);
    for (auto& c : w.x) c *= to_launch;
    for (auto& c : w.y) c *= to_launch;

    // Forward step sequence (full steps, then remainder); inverted in reverse.
    std::vector<double> steps;
    double rem = span_m;
    while (rem > 1e-9) {
        const double dz = std::min(step_m, rem);
        steps.push_back(dz);
        rem -= dz;
    }

    const std::size_t n = w.size();
    const double fs = w.sample_rate;
    cvec half_op(n);
    double op_dz = -1.0;
    auto fill_half_op = [&](double dz) {
        for (std::size_t k = 0; k < n; ++k) {
            const double om = 2.0 * M_PI * fft_bin_freq(k, n, fs);
            // inverse of the forward half step: gain and opposite phase
            half_op[k] = std::polar(std::exp(+0.25 * alpha * dz),
                                    -0.25 * beta2 * om * om * dz);
        }
        op_dz = dz;
    };

    for (int s = 0; s < cfg.span_count; ++s) {
        // undo the amplifier that followed this span
        for (auto& c : w.x) c /= gain_amp;
        for (auto& c : w.y) c /= gain_amp;
        for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
            const double dz = *it;
            if (dz != op_dz) fill_half_op(dz);
            fft_inplace(w.x);
            fft_inplace(w.y);
            for (std::size_t k = 0; k < n; ++k) {
                w.x[k] *= half_op[k];
                w.y[k] *= half_op[k];
            }
            ifft_inplace(w.x);
            ifft_inplace(w.y);
            const double h_eff =
                (alpha > 0.0) ? 2.0 * std::sinh(0.5 * alpha * dz) / alpha : dz;
            const double g = -gamma_eff * h_eff;
            for (std::size_t k = 0; k < n; ++k) {
                const double p = std::norm(w.x[k]) + std::norm(w.y[k]);
                const cplx r = std::polar(1.0, g * p);
                w.x[k] *= r;
                w.y[k] *= r;
            }
            fft_inplace(w.x);
            fft_inplace(w.y);
            for (std::size_t k = 0; k < n; ++k) {
                w.x[k] *= half_op[k];
                w.y[k] *= half_op[k];
            }
            ifft_inplace(w.x);
            ifft_inplace(w.y);
        }
    }
    // return at the caller's power level
    const double back = 1.0 / to_launch;
    for (auto& c : w.x) c *= back;
    for (auto& c : w.y) c *= back;
    return w;
}

DbpTuneResult dbp_tune(const DualPolWaveform& rx, const std::vector<DbpConfig>& grid,
                       const std::function<double(const DualPolWaveform&)>& scorer) {
    if (grid.empty()) throw ParameterError("dbp_tune: grid must be non-empty");
    DbpTuneResult res;
    for (const auto& cfg : grid) {
        const double snr = scorer(dbp_backpropagate(rx, cfg));
        if (snr > res.best_snr_db) {
            res.best_snr_db = snr;
            res.best = cfg;
        }
    }
    return res;
}

} // namespace nlcsim
