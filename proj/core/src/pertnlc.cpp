#include "nlcsim/pertnlc.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace nlcsim {

const cplx* CouplingMatrix::find(int m, int n) const {
    for (const auto& e : entries)
        if (e.m == m && e.n == n) return &e.c;
    return nullptr;
}

void CouplingMatrix::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw ConfigError("coupling matrix: cannot open for writing: " + path);
    out.precision(17);
    out << "L " << memory_L << " cutoff_db " << cutoff_db << " scale "
        << scale_calibration.real() << " " << scale_calibration.imag() << " p0 " << p0
        << "\n";
    for (const auto& e : entries)
        out << e.m << " " << e.n << " " << e.c.real() << " " << e.c.imag() << "\n";
}

CouplingMatrix CouplingMatrix::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("coupling matrix: cannot open: " + path);
    CouplingMatrix m;
    std::string tag;
    double sre, sim;
    if (!(in >> tag >> m.memory_L) || tag != "L")
        throw ConfigError("coupling matrix: bad header in " + path);
    if (!(in >> tag >> m.cutoff_db) || tag != "cutoff_db")
        throw ConfigError("coupling matrix: bad header in " + path);
    if (!(in >> tag >> sre >> sim) || tag != "scale")
        throw ConfigError("coupling matrix: bad header in " + path);
    m.scale_calibration = {sre, sim};
    if (!(in >> tag >> m.p0) || tag != "p0")
        throw ConfigError("coupling matrix: bad header in " + path);
    CouplingEntry e;
    double re, im;
    while (in >> e.m >> e.n >> re >> im) {
        e.c = {re, im};
        m.entries.push_back(e);
        if (e.m == 0 && e.n == 0) m.c00 = e.c;
    }
    return m;
}

namespace {

/// Spectral variance of the raised-cosine power spectrum (the RRC field
/// pulse squared), in units of the symbol rate.
double rc_spectral_variance(double rolloff) {
    const double b = std::max(rolloff, 1e-6);
    // S(f): 1 for |f| < (1-b)/2, raised-cosine rolloff to (1+b)/2.
    const int n = 4000;
    double num = 0.0, den = 0.0;
    const double fmax = 0.5 * (1.0 + b);
    for (int i = 0; i < n; ++i) {
        const double f = (i + 0.5) * fmax / n;
        double s;
        if (f <= 0.5 * (1.0 - b))
            s = 1.0;
        else
            s = 0.5 * (1.0 + std::cos(M_PI / b * (f - 0.5 * (1.0 - b))));
        num += f * f * s;
        den += s;
    }
    return num / den;
}

struct KernelParams {
    double tau2;  // Gaussian width^2 (s^2)
    double symT;  // symbol period (s)
};

/// Dispersed-Gaussian four-pulse overlap at accumulated dispersion b2z
/// (beta2 x distance, s^2), for relative symbol offsets (m, n).
cplx overlap_kernel(const KernelParams& kp, double b2z, int m, int n) {
    const cplx j(0.0, 1.0);
    const cplx s = kp.tau2 - j * b2z;
    const cplx sb = std::conj(s);
    const cplx p = 2.0 / s + 1.0 / sb;
    const double a = n * kp.symT, b = (m + n) * kp.symT, c = m * kp.symT;
    const cplx q = (a + c) / s + b / sb;
    const cplx r = (a * a + c * c) / s + b * b / sb;
    const cplx t0 = q / p;
    const cplx chi = 0.5 * (r - q * q / p);
    const cplx w = 1.0 / p + sb;
    const cplx arg = -chi - t0 * t0 / (2.0 * w);
    if (arg.real() < -700.0) return 0.0;
    const cplx pref = kp.tau2 * kp.tau2 / (s * std::sqrt(sb)) *
                      std::sqrt(2.0 * M_PI / (p * w));
    return pref * std::exp(arg) / (M_PI * kp.tau2);
}

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    // Nodes/weights on [-1, 1] by Newton on Legendre polynomials.
    x.resize(n);
    w.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p1 = 1.0, p2 = 0.0;
            for (int k = 0; k < n; ++k) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * k + 1.0) * z * p2 - k * p3) / (k + 1.0);
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            const double dz = p1 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        w[n - 1 - i] = w[i];
    }
}

cplx integrate_coefficient(const LinkConfig& link, const KernelParams& kp,
                           double gamma_eff, int m, int n, int quad_points) {
    std::vector<double> gx, gw;
    gauss_legendre(quad_points, gx, gw);
    cplx acc = 0.0;
    double z_origin = 0.0; // accumulated distance at span start
    for (const auto& span : link.spans) {
        const double len_m = span.length_km * 1000.0;
        const double alpha = span.alpha_np_m();
        const double beta2 = span.beta2();
        for (int i = 0; i < quad_points; ++i) {
            const double zl = 0.5 * len_m * (gx[i] + 1.0); // local position
            const double wgt = 0.5 * len_m * gw[i];
            // dispersion accumulates across spans, power resets each span
            const double b2z = beta2 * (z_origin + zl);
            acc += wgt * std::exp(-alpha * zl) * overlap_kernel(kp, b2z, m, n);
        }
        z_origin += len_m;
    }
    return cplx(0.0, 1.0) * gamma_eff * kp.symT * acc;
}

KernelParams make_kernel_params(const RrcFilterSpec& pulse, double symbol_rate) {
    KernelParams kp;
    kp.symT = 1.0 / symbol_rate;
    const double sig_f2 = rc_spectral_variance(pulse.rolloff) * symbol_rate * symbol_rate;
    kp.tau2 = 1.0 / (8.0 * M_PI * M_PI * sig_f2);
    return kp;
}

} // namespace

cplx coupling_coefficient(const LinkConfig& link, const RrcFilterSpec& pulse,
                          double symbol_rate, int m, int n,
                          int quad_points_per_span) {
    if (link.spans.empty()) throw ConfigError("coupling: link has no spans");
    const KernelParams kp = make_kernel_params(pulse, symbol_rate);
    const double gamma_eff = (8.0 / 9.0) * link.spans.front().gamma;
    return integrate_coefficient(link, kp, gamma_eff, m, n, quad_points_per_span);
}

CouplingMatrix generate_coupling_matrix(const LinkConfig& link,
                                        const RrcFilterSpec& pulse,
                                        double symbol_rate, int memory_L,
                                        double cutoff_db, int quad_points_per_span) {
    if (memory_L < 0) throw ParameterError("coupling: memory length must be >= 0");
    if (link.spans.empty()) throw ConfigError("coupling: link has no spans");
    const KernelParams kp = make_kernel_params(pulse, symbol_rate);
    const double gamma_eff = (8.0 / 9.0) * link.spans.front().gamma;

    CouplingMatrix mat;
    mat.memory_L = memory_L;
    mat.cutoff_db = cutoff_db;
    mat.p0 = dbm_to_watt(link.launch_power_dbm_per_channel) * pulse_peak_factor(pulse);

    mat.c00 = integrate_coefficient(link, kp, gamma_eff, 0, 0, quad_points_per_span);
    const double floor_mag = std::abs(mat.c00) * std::pow(10.0, cutoff_db / 20.0);

    // C(m,n) = C(n,m) by construction: compute the lower triangle and mirror.
    for (int m = -memory_L; m <= memory_L; ++m) {
        for (int n = -memory_L; n <= m; ++n) {
            if (!std::isfinite(floor_mag))
                throw ConfigError("coupling: non-convergent integration (C(0,0) not finite)");
            const cplx c = (m == 0 && n == 0)
                               ? mat.c00
                               : integrate_coefficient(link, kp, gamma_eff, m, n,
                                                       quad_points_per_span);
            if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
                std::ostringstream msg;
                msg << "coupling: non-convergent integration at (m,n)=(" << m << ","
                    << n << ")";
                throw ConfigError(msg.str());
            }
            if (std::abs(c) >= floor_mag || (m == 0 && n == 0)) {
                mat.entries.push_back({m, n, c});
                if (n != m) mat.entries.push_back({n, m, c});
            }
        }
    }
    std::sort(mat.entries.begin(), mat.entries.end(),
              [](const CouplingEntry& a, const CouplingEntry& b) {
                  const double ma = std::abs(a.c), mb = std::abs(b.c);
                  if (ma != mb) return ma > mb;
                  if (a.m != b.m) return a.m < b.m;
                  return a.n < b.n;
              });
    return mat;
}

namespace {

struct PaddedFrame {
    cvec x, y;
    std::size_t off; // index of symbol 0
};

PaddedFrame pad_frame(const SymbolFrame& f, int l) {
    PaddedFrame p;
    p.off = std::size_t(l);
    p.x.assign(f.size() + 2 * l, cplx(0, 0));
    p.y.assign(f.size() + 2 * l, cplx(0, 0));
    std::copy(f.x.begin(), f.x.end(), p.x.begin() + l);
    std::copy(f.y.begin(), f.y.end(), p.y.begin() + l);
    return p;
}

/// Complex phase sums sigma(k) = P0 * [sum_{m!=0}(2|Ax(k+m)|^2+|Ay(k+m)|^2)
/// C(m,0) + (2|Ax(k)|^2+|Ay(k)|^2) C(0,0)]; phi = Im{scale * sigma}.
void phase_sums(const PaddedFrame& pf, const CouplingMatrix& mat, bool include_c00,
                cvec& sig_x, cvec& sig_y) {
    const std::size_t n = pf.x.size() - 2 * pf.off;
    sig_x.assign(n, cplx(0, 0));
    sig_y.assign(n, cplx(0, 0));
    for (const auto& e : mat.entries) {
        if (e.n != 0) continue;
        if (e.m == 0 && !include_c00) continue;
        const cplx* ax = pf.x.data() + pf.off + e.m;
        const cplx* ay = pf.y.data() + pf.off + e.m;
        for (std::size_t k = 0; k < n; ++k) {
            const double px = std::norm(ax[k]);
            const double py = std::norm(ay[k]);
            sig_x[k] += (2.0 * px + py) * e.c;
            sig_y[k] += (2.0 * py + px) * e.c;
        }
    }
    for (std::size_t k = 0; k < n; ++k) {
        sig_x[k] *= mat.p0;
        sig_y[k] *= mat.p0;
    }
}

/// Additive sums per the printed model: the (m!=0, n!=0) same- and cross-pol
/// triple products plus the m!=0, n=0 cross-polarization single sum.
void additive_sums(const PaddedFrame& pf, const CouplingMatrix& mat, cvec& dx,
                   cvec& dy) {
    const std::size_t n = pf.x.size() - 2 * pf.off;
    dx.assign(n, cplx(0, 0));
    dy.assign(n, cplx(0, 0));
    const cplx* bx = pf.x.data() + pf.off;
    const cplx* by = pf.y.data() + pf.off;
    for (const auto& e : mat.entries) {
        const long m = e.m, nn = e.n;
        if (m == 0) continue; // both families require m != 0
        const cplx c = e.c;
        const cplx* xm = bx + m;
        const cplx* ym = by + m;
        if (nn != 0) {
            const cplx* xn = bx + nn;
            const cplx* yn = by + nn;
            const cplx* xmn = bx + m + nn;
            const cplx* ymn = by + m + nn;
            for (std::size_t k = 0; k < n; ++k) {
                dx[k] += (xn[k] * std::conj(xmn[k]) + yn[k] * std::conj(ymn[k])) *
                         xm[k] * c;
                dy[k] += (yn[k] * std::conj(ymn[k]) + xn[k] * std::conj(xmn[k])) *
                         ym[k] * c;
            }
        } else {
            // n = 0 cross-polarization terms: Ay(0) Ay*(m) Ax(m) C(m,0)
            for (std::size_t k = 0; k < n; ++k) {
                dx[k] += by[k] * std::conj(ym[k]) * xm[k] * c;
                dy[k] += bx[k] * std::conj(xm[k]) * ym[k] * c;
            }
        }
    }
    const double p32 = std::pow(mat.p0, 1.5);
    for (std::size_t k = 0; k < n; ++k) {
        dx[k] *= p32;
        dy[k] *= p32;
    }
}

} // namespace

void nli_unit_vector(const SymbolFrame& tx, const CouplingMatrix& matrix, cvec& ux,
                     cvec& uy) {
    // indices reach k + m + n, so pad by 2L
    const PaddedFrame pf = pad_frame(tx, 2 * matrix.memory_L);
    cvec sx, sy;
    phase_sums(pf, matrix, true, sx, sy);
    additive_sums(pf, matrix, ux, uy);
    const cplx j(0.0, 1.0);
    for (std::size_t k = 0; k < tx.size(); ++k) {
        ux[k] += j * sx[k] * tx.x[k];
        uy[k] += j * sy[k] * tx.y[k];
    }
}

CalibrationReport calibrate_scale(CouplingMatrix& matrix, const SymbolFrame& rx,
                                  const SymbolFrame& tx_truth) {
    if (rx.size() != tx_truth.size())
        throw ParameterError("calibrate_scale: frames must be aligned");
    if (rx.size() < 10000)
        throw ParameterError("calibrate_scale: need >= 1e4 symbols");
    cvec ux, uy;
    nli_unit_vector(tx_truth, matrix, ux, uy);

    const std::size_t guard =
        std::max<std::size_t>(std::max(rx.guard, tx_truth.guard), matrix.memory_L);
    cplx num = 0.0;
    double den = 0.0, rpow = 0.0;
    for (std::size_t k = guard; k + guard < rx.size(); ++k) {
        const cplx r_x = rx.x[k] - tx_truth.x[k];
        const cplx r_y = rx.y[k] - tx_truth.y[k];
        num += std::conj(ux[k]) * r_x + std::conj(uy[k]) * r_y;
        den += std::norm(ux[k]) + std::norm(uy[k]);
        rpow += std::norm(r_x) + std::norm(r_y);
    }
    CalibrationReport rep;
    if (den <= 1e-30 * rpow || den == 0.0) {
        rep.skipped = true;
        return rep;
    }
    rep.scale = num / den;
    // residual ||r - s u||^2 = ||r||^2 - |<u,r>|^2 / ||u||^2
    rep.residual_ratio = rpow > 0.0 ? 1.0 - std::norm(num) / (den * rpow) : 1.0;
    matrix.scale_calibration = rep.scale;
    return rep;
}

NliEstimate estimate_nli(const SymbolFrame& candidates, const CouplingMatrix& matrix,
                         bool include_c00_phase) {
    const int l = matrix.memory_L;
    if (candidates.size() <= std::size_t(2 * l))
        throw ParameterError("estimate_nli: frame must be longer than 2L");
    const PaddedFrame pf = pad_frame(candidates, 2 * l);
    NliEstimate est;
    est.edge_guard = std::size_t(l);
    additive_sums(pf, matrix, est.delta_x, est.delta_y);
    cvec sx, sy;
    phase_sums(pf, matrix, include_c00_phase, sx, sy);

    const cplx s = matrix.scale_calibration;
    const std::size_t n = candidates.size();
    est.phi_x.resize(n);
    est.phi_y.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        est.delta_x[k] *= s;
        est.delta_y[k] *= s;
        est.phi_x[k] = (s * sx[k]).imag();
        est.phi_y[k] = (s * sy[k]).imag();
    }
    return est;
}

SymbolFrame compensate(const SymbolFrame& rx, const NliEstimate& nli) {
    if (rx.size() != nli.delta_x.size())
        throw ParameterError("compensate: estimate length mismatch");
    SymbolFrame out = rx;
    out.guard = std::max(rx.guard, nli.edge_guard);
    for (std::size_t k = 0; k < rx.size(); ++k) {
        out.x[k] = rx.x[k] * std::polar(1.0, -nli.phi_x[k]) - nli.delta_x[k];
        out.y[k] = rx.y[k] * std::polar(1.0, -nli.phi_y[k]) - nli.delta_y[k];
    }
    return out;
}

} // namespace nlcsim
