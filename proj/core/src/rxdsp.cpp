#include "nlcsim/rxdsp.hpp"

#include "nlcsim/fft.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace nlcsim {

double CdcSpec::beta2_total() const {
    const double lambda = ref_wavelength_nm * 1e-9;
    const double d_si = total_dispersion_ps_nm * 1e-3; // ps/nm -> s/m
    return -d_si * lambda * lambda / (2.0 * M_PI * kLightSpeed);
}

namespace {

DualPolWaveform dispersion_filter(const DualPolWaveform& input, double b2l,
                                  double sign) {
    DualPolWaveform w = input;
    const std::size_t n = w.size();
    fft_inplace(w.x);
    fft_inplace(w.y);
    for (std::size_t k = 0; k < n; ++k) {
        const double om = 2.0 * M_PI * fft_bin_freq(k, n, w.sample_rate);
        const cplx h = std::polar(1.0, sign * 0.5 * b2l * om * om);
        w.x[k] *= h;
        w.y[k] *= h;
    }
    ifft_inplace(w.x);
    ifft_inplace(w.y);
    return w;
}

} // namespace

DualPolWaveform cdc_compensate(const DualPolWaveform& input, const CdcSpec& spec) {
    return dispersion_filter(input, spec.beta2_total(), -1.0);
}

DualPolWaveform apply_dispersion(const DualPolWaveform& input, const CdcSpec& spec) {
    return dispersion_filter(input, spec.beta2_total(), +1.0);
}

namespace {

// Window of num_taps samples around symbol k in a 2-sps stream, circular.
inline void fill_window(const cvec& s, std::size_t k, int num_taps, cplx* out) {
    const std::size_t n = s.size();
    const long base = long(2 * k) - long(num_taps / 2);
    for (int i = 0; i < num_taps; ++i) {
        long idx = base + i;
        idx %= long(n);
        if (idx < 0) idx += long(n);
        out[i] = s[std::size_t(idx)];
    }
}

} // namespace

MmseEqualizer mmse_train(const DualPolWaveform& rx, const SymbolFrame& pilots,
                         std::size_t pilot_len, int num_taps) {
    if (num_taps < 1) throw ParameterError("mmse_train: num_taps must be >= 1");
    if (pilot_len < 10 * std::size_t(num_taps))
        throw ParameterError("mmse_train: pilot length must be >= 10 x num_taps");
    if (pilot_len > pilots.size())
        throw ParameterError("mmse_train: pilot length exceeds pilot frame");
    const double sps = rx.sample_rate / pilots.symbol_rate;
    if (std::abs(sps - 2.0) > 1e-9)
        throw ParameterError("mmse_train: rx must be at 2 samples/symbol");

    const int n = num_taps;
    const int dim = 2 * n;
    // Skip symbols whose window would touch the guard region.
    const std::size_t skip = rx.guard / 2 + std::size_t(n);
    const std::size_t first = skip;
    const std::size_t last = std::min(pilot_len, pilots.size());
    if (last <= first + 10 * std::size_t(n))
        throw ParameterError("mmse_train: not enough usable pilots after guard");

    Eigen::MatrixXcd gram = Eigen::MatrixXcd::Zero(dim, dim);
    Eigen::VectorXcd rhs_x = Eigen::VectorXcd::Zero(dim);
    Eigen::VectorXcd rhs_y = Eigen::VectorXcd::Zero(dim);
    Eigen::VectorXcd row(dim);

    for (std::size_t k = first; k < last; ++k) {
        fill_window(rx.x, k, n, row.data());
        fill_window(rx.y, k, n, row.data() + n);
        gram.noalias() += row * row.adjoint();
        rhs_x.noalias() += row * std::conj(pilots.x[k]);
        rhs_y.noalias() += row * std::conj(pilots.y[k]);
    }
    // gram is built as sum of u u^H with the coefficient vector applied as
    // c^T u; solve gram^T c = conj(rhs) via conjugation symmetry.
    MmseEqualizer eq;
    eq.num_taps = n;
    const double tr = gram.real().trace() / dim;
    double ridge = 1e-12 * tr;
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(gram);
    if (lu.rank() < dim) {
        ridge = 1e-6 * tr;
        eq.regularized_warning = true;
    }
    gram += ridge * Eigen::MatrixXcd::Identity(dim, dim);
    Eigen::LDLT<Eigen::MatrixXcd> ldlt(gram);
    Eigen::VectorXcd cx = ldlt.solve(rhs_x).conjugate();
    Eigen::VectorXcd cy = ldlt.solve(rhs_y).conjugate();

    for (int p = 0; p < 2; ++p) {
        eq.taps[0][p].assign(cx.data() + p * n, cx.data() + (p + 1) * n);
        eq.taps[1][p].assign(cy.data() + p * n, cy.data() + (p + 1) * n);
    }
    eq.trained = true;

    // Training MSE
    double mse = 0.0;
    std::vector<cplx> win(dim);
    for (std::size_t k = first; k < last; ++k) {
        fill_window(rx.x, k, n, win.data());
        fill_window(rx.y, k, n, win.data() + n);
        cplx ox = 0.0, oy = 0.0;
        for (int i = 0; i < dim; ++i) {
            ox += (i < n ? eq.taps[0][0][i] : eq.taps[0][1][i - n]) * win[i];
            oy += (i < n ? eq.taps[1][0][i] : eq.taps[1][1][i - n]) * win[i];
        }
        mse += std::norm(ox - pilots.x[k]) + std::norm(oy - pilots.y[k]);
    }
    eq.training_mse = mse / (2.0 * double(last - first));
    return eq;
}

SymbolFrame mmse_apply(const MmseEqualizer& eq, const DualPolWaveform& rx) {
    if (!eq.trained) throw ConfigError("mmse_apply: equalizer not trained");
    const int n = eq.num_taps;
    const std::size_t nsym = rx.size() / 2;
    SymbolFrame out;
    out.symbol_rate = rx.sample_rate / 2.0;
    out.x.resize(nsym);
    out.y.resize(nsym);
    out.guard = rx.guard / 2 + std::size_t(n);
    std::vector<cplx> win(2 * n);
    for (std::size_t k = 0; k < nsym; ++k) {
        fill_window(rx.x, k, n, win.data());
        fill_window(rx.y, k, n, win.data() + n);
        cplx ox = 0.0, oy = 0.0;
        for (int i = 0; i < n; ++i) {
            ox += eq.taps[0][0][i] * win[i] + eq.taps[0][1][i] * win[n + i];
            oy += eq.taps[1][0][i] * win[i] + eq.taps[1][1][i] * win[n + i];
        }
        out.x[k] = ox;
        out.y[k] = oy;
    }
    return out;
}

int find_alignment(const cvec& rx, const cvec& ref, int max_abs_shift) {
    if (rx.size() != ref.size() || rx.empty())
        throw ParameterError("find_alignment: sequences must be non-empty and equal length");
    cvec a = fft(rx), b = fft(ref);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] *= std::conj(b[i]);
    ifft_inplace(a);
    const long n = long(a.size());
    long best = 0;
    double bm = -1.0;
    for (long s = -long(max_abs_shift); s <= long(max_abs_shift); ++s) {
        long idx = ((s % n) + n) % n;
        const double m = std::abs(a[std::size_t(idx)]);
        if (m > bm) {
            bm = m;
            best = s;
        }
    }
    return int(best);
}

SymbolFrame circular_shift(const SymbolFrame& f, int shift) {
    SymbolFrame out = f;
    const long n = long(f.size());
    if (n == 0) return out;
    for (long k = 0; k < n; ++k) {
        long src = ((k + shift) % n + n) % n;
        out.x[std::size_t(k)] = f.x[std::size_t(src)];
        out.y[std::size_t(k)] = f.y[std::size_t(src)];
    }
    return out;
}

SymbolFrame ddpll_carrier_recovery(const SymbolFrame& frame, const QamConstellation& c,
                                   double loop_bw) {
    if (!(loop_bw > 0.0) || loop_bw >= 1.0)
        throw ParameterError("ddpll: loop bandwidth must be in (0, 1)");
    SymbolFrame out = frame;
    double theta = 0.0;
    for (std::size_t k = 0; k < frame.size(); ++k) {
        const cplx rot = std::polar(1.0, -theta);
        const cplx yx = frame.x[k] * rot;
        const cplx yy = frame.y[k] * rot;
        out.x[k] = yx;
        out.y[k] = yy;
        const cplx dx = nearest_point(yx, c);
        const cplx dy = nearest_point(yy, c);
        // joint phase error across polarizations (shared laser)
        const cplx exab = yx * std::conj(dx) + yy * std::conj(dy);
        const double err = std::arg(exab);
        theta += loop_bw * err;
    }
    return out;
}

SymbolFrame decimate_to_symbols(const DualPolWaveform& w, double symbol_rate,
                                std::size_t phase) {
    const double sps_d = w.sample_rate / symbol_rate;
    const auto sps = std::size_t(std::lround(sps_d));
    if (std::abs(sps_d - double(sps)) > 1e-9 || sps < 1)
        throw ParameterError("decimate: sample rate must be an integer multiple of symbol rate");
    SymbolFrame f;
    f.symbol_rate = symbol_rate;
    const std::size_t n = w.size() / sps;
    f.x.resize(n);
    f.y.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        f.x[k] = w.x[k * sps + phase];
        f.y[k] = w.y[k * sps + phase];
    }
    f.guard = (w.guard + sps - 1) / sps;
    return f;
}

} // namespace nlcsim
