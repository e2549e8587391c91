#include "nlcsim/rrc.hpp"

#include "nlcsim/fft.hpp"

#include <algorithm>
#include <cmath>

namespace nlcsim {

void RrcFilterSpec::validate() const {
    if (!(rolloff > 0.0) || rolloff > 1.0)
        throw ParameterError("rrc: rolloff must be in (0, 1]");
    if (num_taps < 1 || num_taps % 2 == 0)
        throw ParameterError("rrc: num_taps must be odd and positive");
    if (samples_per_symbol < 2)
        throw ParameterError("rrc: samples_per_symbol must be >= 2");
}

std::vector<double> rrc_taps(const RrcFilterSpec& spec) {
    spec.validate();
    const double beta = spec.rolloff;
    const int n = spec.num_taps;
    const int sps = spec.samples_per_symbol;
    const int mid = (n - 1) / 2;
    std::vector<double> h(n);
    for (int i = 0; i < n; ++i) {
        const double t = double(i - mid) / double(sps); // in symbol periods
        const double x = 4.0 * beta * t;
        double v;
        if (std::abs(t) < 1e-12) {
            v = 1.0 + beta * (4.0 / M_PI - 1.0);
        } else if (std::abs(std::abs(x) - 1.0) < 1e-9) {
            const double a = M_PI / (4.0 * beta);
            v = (beta / std::sqrt(2.0)) *
                ((1.0 + 2.0 / M_PI) * std::sin(a) + (1.0 - 2.0 / M_PI) * std::cos(a));
        } else {
            v = (std::sin(M_PI * t * (1.0 - beta)) + x * std::cos(M_PI * t * (1.0 + beta))) /
                (M_PI * t * (1.0 - x * x));
        }
        h[i] = v;
    }
    double energy = 0.0;
    for (double v : h) energy += v * v;
    const double s = 1.0 / std::sqrt(energy);
    for (double& v : h) v *= s;
    return h;
}

DualPolWaveform shape_pulses(const SymbolFrame& frame, const RrcFilterSpec& spec) {
    spec.validate();
    if (frame.x.empty() || frame.x.size() != frame.y.size())
        throw ParameterError("shape_pulses: frame must be non-empty with equal polarizations");
    const int sps = spec.samples_per_symbol;
    auto taps = rrc_taps(spec);
    // Upsampling by sps divides mean power by sps; sqrt(sps) tap gain restores it.
    const double g = std::sqrt(double(sps));
    for (double& v : taps) v *= g;

    const std::size_t n = frame.x.size() * std::size_t(sps);
    cvec ux(n, cplx(0, 0)), uy(n, cplx(0, 0));
    for (std::size_t k = 0; k < frame.x.size(); ++k) {
        ux[k * sps] = frame.x[k];
        uy[k * sps] = frame.y[k];
    }
    DualPolWaveform w;
    w.x = filter_same(ux, taps);
    w.y = filter_same(uy, taps);
    w.sample_rate = frame.symbol_rate * sps;
    w.guard = std::size_t((spec.num_taps - 1) / 2) + frame.guard * std::size_t(sps);
    return w;
}

DualPolWaveform matched_filter(const DualPolWaveform& w, double symbol_rate,
                               double rolloff, int num_taps_per_symbol) {
    const double sps_d = w.sample_rate / symbol_rate;
    const int sps = int(std::lround(sps_d));
    if (std::abs(sps_d - double(sps)) > 1e-9 || sps < 2)
        throw ParameterError("matched_filter: sample rate must be an integer multiple >= 2 of the symbol rate");
    RrcFilterSpec spec;
    spec.rolloff = rolloff;
    spec.samples_per_symbol = sps;
    spec.num_taps = num_taps_per_symbol * sps + 1;
    auto taps = rrc_taps(spec);
    // TX taps carry sqrt(sps); 1/sqrt(sps) here makes the cascade unity at
    // symbol instants and the passband gain ~1.
    const double g = 1.0 / std::sqrt(double(sps));
    for (double& v : taps) v *= g;

    DualPolWaveform out;
    out.x = filter_same(w.x, taps);
    out.y = filter_same(w.y, taps);
    out.sample_rate = w.sample_rate;
    out.center_freq_offset = w.center_freq_offset;
    out.guard = w.guard + std::size_t((spec.num_taps - 1) / 2);
    return out;
}

double pulse_peak_factor(const RrcFilterSpec& spec) {
    auto taps = rrc_taps(spec);
    double peak = 0.0;
    for (double v : taps) peak = std::max(peak, std::abs(v));
    return peak * peak * double(spec.samples_per_symbol);
}

} // namespace nlcsim
