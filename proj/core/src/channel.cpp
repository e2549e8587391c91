#include "nlcsim/channel.hpp"

#include "nlcsim/fft.hpp"

#include <cmath>

namespace nlcsim {

double FiberParams::beta2() const {
    const double lambda = ref_wavelength_nm * 1e-9;
    const double d_si = dispersion_D * 1e-6; // ps/(nm km) -> s/m^2
    return -d_si * lambda * lambda / (2.0 * M_PI * kLightSpeed);
}

double FiberParams::alpha_np_m() const {
    return alpha_db_km * (std::log(10.0) / 10.0) / 1000.0;
}

void FiberParams::validate() const {
    if (alpha_db_km < 0.0) throw ParameterError("fiber: alpha must be >= 0");
    if (!(length_km > 0.0)) throw ParameterError("fiber: length must be positive");
    if (!(ref_wavelength_nm > 0.0)) throw ParameterError("fiber: wavelength must be positive");
}

void LinkConfig::validate() const {
    for (const auto& s : spans) {
        s.validate();
        if (ssfm_step_m > s.length_km * 1000.0)
            throw ConfigError("link: ssfm step larger than span");
    }
    if (!(ssfm_step_m > 0.0)) throw ConfigError("link: ssfm step must be positive");
}

double LinkConfig::total_length_km() const {
    double l = 0.0;
    for (const auto& s : spans) l += s.length_km;
    return l;
}

double LinkConfig::total_dispersion_ps_nm() const {
    double d = 0.0;
    for (const auto& s : spans) d += s.dispersion_D * s.length_km;
    return d;
}

LinkConfig LinkConfig::uniform(int span_count, const FiberParams& fiber) {
    LinkConfig link;
    link.spans.assign(std::size_t(span_count), fiber);
    return link;
}

namespace {

/// Dispersion + loss over dz applied in the frequency domain (in place, on
/// spectra).
void linear_half(cvec& sx, cvec& sy, double fs, double beta2, double alpha_np,
                 double dz) {
    const std::size_t n = sx.size();
    for (std::size_t k = 0; k < n; ++k) {
        const double w = 2.0 * M_PI * fft_bin_freq(k, n, fs);
        const double phase = 0.5 * beta2 * w * w * dz;
        const double att = std::exp(-0.5 * alpha_np * dz);
        const cplx h = std::polar(att, phase);
        sx[k] *= h;
        sy[k] *= h;
    }
}

} // namespace

DualPolWaveform ssfm_propagate_span(const DualPolWaveform& input,
                                    const FiberParams& fiber, double step_m) {
    fiber.validate();
    if (!(step_m > 0.0)) throw ParameterError("ssfm: step must be positive");
    const double span_m = fiber.length_km * 1000.0;
    if (step_m > span_m) throw ConfigError("ssfm: step larger than span");

    const double beta2 = fiber.beta2();
    const double alpha = fiber.alpha_np_m();
    const double gamma_eff = (8.0 / 9.0) * fiber.gamma; // Manakov

    DualPolWaveform w = input;
    const double fs = w.sample_rate;
    double remaining = span_m;

    // Precompute the half-step operator for the common step size.
    const std::size_t n = w.size();
    cvec half_op(n);
    auto fill_half_op = [&](double dz) {
        for (std::size_t k = 0; k < n; ++k) {
            const double om = 2.0 * M_PI * fft_bin_freq(k, n, fs);
            half_op[k] = std::polar(std::exp(-0.25 * alpha * dz),
                                    0.25 * beta2 * om * om * dz);
        }
    };
    fill_half_op(step_m);
    double op_dz = step_m;

    fft_inplace(w.x);
    fft_inplace(w.y);
    while (remaining > 1e-9) {
        const double dz = std::min(step_m, remaining);
        if (dz != op_dz) {
            fill_half_op(dz);
            op_dz = dz;
        }
        // first linear half step (on spectra)
        for (std::size_t k = 0; k < n; ++k) {
            w.x[k] *= half_op[k];
            w.y[k] *= half_op[k];
        }
        ifft_inplace(w.x);
        ifft_inplace(w.y);
        // nonlinear phase at mid-step power; 2 sinh(a dz/2)/a is the
        // loss-weighted effective length referenced to the midpoint
        const double h_eff = (alpha > 0.0)
                                 ? 2.0 * std::sinh(0.5 * alpha * dz) / alpha
                                 : dz;
        const double g = gamma_eff * h_eff;
        for (std::size_t k = 0; k < n; ++k) {
            const double p = std::norm(w.x[k]) + std::norm(w.y[k]);
            const cplx r = std::polar(1.0, g * p);
            w.x[k] *= r;
            w.y[k] *= r;
        }
        fft_inplace(w.x);
        fft_inplace(w.y);
        // second linear half step
        for (std::size_t k = 0; k < n; ++k) {
            w.x[k] *= half_op[k];
            w.y[k] *= half_op[k];
        }
        remaining -= dz;
    }
    ifft_inplace(w.x);
    ifft_inplace(w.y);
    return w;
}

DualPolWaveform edfa(const DualPolWaveform& input, double gain_db,
                     double noise_figure_db, RandomStream& rng) {
    if (gain_db < 0.0) throw ParameterError("edfa: gain must be >= 0 dB");
    const double g_lin = db_to_lin(gain_db);
    const double f_lin = db_to_lin(noise_figure_db);
    const double nu = kLightSpeed / kRefWavelength;
    const double psd = (g_lin - 1.0) * f_lin * kPlanck * nu / 2.0; // per pol
    const double npow = psd * input.sample_rate;
    const double sigma = std::sqrt(npow / 2.0); // per quadrature

    DualPolWaveform w = input;
    const double amp = std::sqrt(g_lin);
    for (std::size_t k = 0; k < w.size(); ++k) {
        w.x[k] = w.x[k] * amp + cplx(sigma * rng.gaussian(), sigma * rng.gaussian());
        w.y[k] = w.y[k] * amp + cplx(sigma * rng.gaussian(), sigma * rng.gaussian());
    }
    return w;
}

DualPolWaveform propagate_link(const DualPolWaveform& input, const LinkConfig& link) {
    link.validate();
    DualPolWaveform w = input;
    for (std::size_t s = 0; s < link.spans.size(); ++s) {
        const auto& fiber = link.spans[s];
        w = ssfm_propagate_span(w, fiber, link.ssfm_step_m);
        RandomStream rng(link.rng_seed, "edfa-ase", s);
        w = edfa(w, fiber.span_loss_db(), link.edfa_noise_figure_db, rng);
    }
    return w;
}

} // namespace nlcsim
