#include "nlcsim/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <map>
#include <mutex>

namespace nlcsim {

namespace {

// FFTW plan creation is not thread-safe; executions on distinct buffers are.
std::mutex g_plan_mutex;

struct PlanPair {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
};

fftw_plan get_plan(std::size_t n, int sign) {
    static std::map<std::size_t, PlanPair> cache;
    std::lock_guard<std::mutex> lock(g_plan_mutex);
    auto& pp = cache[n];
    fftw_plan& p = (sign == FFTW_FORWARD) ? pp.fwd : pp.bwd;
    if (!p) {
        cvec scratch(n);
        auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
        p = fftw_plan_dft_1d(int(n), buf, buf, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    }
    return p;
}

void transform(cvec& v, int sign) {
    if (v.empty()) return;
    fftw_plan p = get_plan(v.size(), sign);
    auto* buf = reinterpret_cast<fftw_complex*>(v.data());
    fftw_execute_dft(p, buf, buf);
}

} // namespace

void fft_inplace(cvec& v) { transform(v, FFTW_FORWARD); }

void ifft_inplace(cvec& v) {
    transform(v, FFTW_BACKWARD);
    const double s = 1.0 / double(v.size());
    for (auto& c : v) c *= s;
}

cvec fft(cvec v) {
    fft_inplace(v);
    return v;
}

cvec ifft(cvec v) {
    ifft_inplace(v);
    return v;
}

double fft_bin_freq(std::size_t k, std::size_t n, double fs) {
    double f = double(k) * fs / double(n);
    if (k > n / 2) f -= fs;
    return f;
}

void frequency_shift(DualPolWaveform& w, double df) {
    if (df == 0.0) return;
    const double step = 2.0 * M_PI * df / w.sample_rate;
    // Recompute the rotator from an integer phase to avoid drift on long frames.
    for (std::size_t i = 0; i < w.x.size(); ++i) {
        const cplx r = std::polar(1.0, step * double(i));
        w.x[i] *= r;
        w.y[i] *= r;
    }
    w.center_freq_offset += df;
}

namespace {

cvec resample_one(const cvec& in, std::size_t m) {
    const std::size_t n = in.size();
    cvec spec = fft(in);
    cvec out(m, cplx(0.0, 0.0));
    const std::size_t keep = std::min(n, m);
    const std::size_t half = keep / 2;
    // positive frequencies [0, half], negative frequencies [-(keep-1-half), -1]
    for (std::size_t k = 0; k <= half; ++k) out[k] = spec[k];
    for (std::size_t k = 1; k + half <= keep - 1; ++k) out[m - k] = spec[n - k];
    const double scale = double(m) / double(n);
    ifft_inplace(out);
    for (auto& c : out) c *= scale;
    return out;
}

} // namespace

DualPolWaveform resample(const DualPolWaveform& w, double target_rate) {
    if (!(target_rate > 0.0)) throw ParameterError("resample: target rate must be positive");
    if (target_rate == w.sample_rate) return w;
    const double ratio = target_rate / w.sample_rate;
    const double m_exact = double(w.size()) * ratio;
    const auto m = std::size_t(std::llround(m_exact));
    if (std::abs(m_exact - double(m)) > 1e-6)
        throw ParameterError("resample: length x rate ratio must be an integer");
    DualPolWaveform out;
    out.x = resample_one(w.x, m);
    out.y = resample_one(w.y, m);
    out.sample_rate = target_rate;
    out.center_freq_offset = w.center_freq_offset;
    out.guard = std::size_t(std::ceil(double(w.guard) * ratio));
    return out;
}

void fft_lowpass(DualPolWaveform& w, double cutoff_hz, double transition_hz) {
    if (!(cutoff_hz > 0.0)) throw ParameterError("fft_lowpass: cutoff must be positive");
    const std::size_t n = w.size();
    fft_inplace(w.x);
    fft_inplace(w.y);
    for (std::size_t k = 0; k < n; ++k) {
        const double f = std::abs(fft_bin_freq(k, n, w.sample_rate));
        double g;
        if (f <= cutoff_hz)
            g = 1.0;
        else if (f >= cutoff_hz + transition_hz)
            g = 0.0;
        else
            g = 0.5 * (1.0 + std::cos(M_PI * (f - cutoff_hz) / transition_hz));
        w.x[k] *= g;
        w.y[k] *= g;
    }
    ifft_inplace(w.x);
    ifft_inplace(w.y);
}

cvec filter_same(const cvec& x, const std::vector<double>& taps) {
    const std::size_t n = x.size(), t = taps.size();
    if (t == 0) throw ParameterError("filter_same: empty taps");
    std::size_t l = 1;
    while (l < n + t - 1) l <<= 1;
    cvec xa(l, cplx(0.0, 0.0)), ha(l, cplx(0.0, 0.0));
    std::copy(x.begin(), x.end(), xa.begin());
    for (std::size_t i = 0; i < t; ++i) ha[i] = taps[i];
    fft_inplace(xa);
    fft_inplace(ha);
    for (std::size_t i = 0; i < l; ++i) xa[i] *= ha[i];
    ifft_inplace(xa);
    const std::size_t delay = (t - 1) / 2;
    cvec out(n);
    std::copy(xa.begin() + delay, xa.begin() + delay + n, out.begin());
    return out;
}

} // namespace nlcsim
