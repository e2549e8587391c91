#include "nlcsim/qam.hpp"

#include <algorithm>
#include <cmath>

namespace nlcsim {

int QamConstellation::bits_per_symbol() const {
    return order == 16 ? 4 : 6;
}

QamConstellation QamConstellation::make(int order) {
    if (order != 16 && order != 64)
        throw ParameterError("qam: order must be 16 or 64");
    QamConstellation c;
    c.order = order;
    const int bps = (order == 16) ? 4 : 6;
    const int half = bps / 2;
    const int levels = 1 << half;
    // Unit average energy: E{|s|^2} = 2 * mean(level^2)
    double mean_sq = 0.0;
    for (int i = 0; i < levels; ++i) {
        const double a = double(2 * i - levels + 1);
        mean_sq += a * a;
    }
    mean_sq /= levels;
    const double scale = 1.0 / std::sqrt(2.0 * mean_sq);

    c.points.resize(order);
    c.labels.resize(order);
    for (uint32_t lab = 0; lab < uint32_t(order); ++lab) {
        const uint32_t gi = lab >> half;          // in-phase Gray bits (MSB half)
        const uint32_t gq = lab & (levels - 1);   // quadrature Gray bits
        // Gray decode: index whose Gray code equals the label bits.
        auto gray_decode = [](uint32_t g) {
            uint32_t i = 0;
            for (; g; g >>= 1) i ^= g;
            return i;
        };
        const double li = double(2 * int(gray_decode(gi)) - levels + 1);
        const double lq = double(2 * int(gray_decode(gq)) - levels + 1);
        c.points[lab] = cplx(li, lq) * scale;
        c.labels[lab] = lab;
    }
    return c;
}

SymbolFrame map_symbols(const std::vector<uint8_t>& bits, const QamConstellation& c,
                        double symbol_rate) {
    const int bps = c.bits_per_symbol();
    if (bits.empty() || bits.size() % std::size_t(2 * bps) != 0)
        throw ParameterError("map_symbols: bit count must be a positive multiple of 2 x bits-per-symbol");
    const std::size_t n = bits.size() / std::size_t(2 * bps);
    SymbolFrame f;
    f.symbol_rate = symbol_rate;
    f.x.resize(n);
    f.y.resize(n);
    f.source_bits = bits;
    auto take = [&](std::size_t pos) {
        uint32_t lab = 0;
        for (int b = 0; b < bps; ++b) lab = (lab << 1) | (bits[pos + b] & 1);
        return lab;
    };
    for (std::size_t k = 0; k < n; ++k) {
        f.x[k] = c.points[take(k * 2 * bps)];
        f.y[k] = c.points[take(k * 2 * bps + bps)];
    }
    return f;
}

namespace {

double logaddexp(double a, double b) {
    if (a < b) std::swap(a, b);
    return a + std::log1p(std::exp(b - a));
}

constexpr double kLlrClip = 30.0;

void demap_pol(const cvec& syms, const QamConstellation& c,
               const std::vector<double>& noise_var, const double* priors,
               std::size_t prior_stride, bool max_log, double* out) {
    const int bps = c.bits_per_symbol();
    const int order = c.order;
    std::vector<double> m0(bps), m1(bps), logp(order);
    for (std::size_t k = 0; k < syms.size(); ++k) {
        const double nv = noise_var.size() == 1 ? noise_var[0] : noise_var[k];
        if (!(nv > 0.0)) throw ParameterError("demap_llr: noise variance must be positive");
        // Symbol priors from per-bit prior LLRs (positive => bit 0).
        if (priors) {
            for (int s = 0; s < order; ++s) {
                double lp = 0.0;
                for (int b = 0; b < bps; ++b) {
                    const double l = priors[k * prior_stride + b];
                    const int bit = (s >> (bps - 1 - b)) & 1;
                    // log P(bit) = -log(1 + exp(-(1-2*bit) * l))
                    const double a = (bit == 0) ? -l : l;
                    lp -= (a > 35.0) ? a : std::log1p(std::exp(a));
                }
                logp[s] = lp;
            }
        }
        const double ninf = -1e300;
        std::fill(m0.begin(), m0.end(), ninf);
        std::fill(m1.begin(), m1.end(), ninf);
        for (int s = 0; s < order; ++s) {
            double metric = -std::norm(syms[k] - c.points[s]) / nv;
            if (priors) metric += logp[s];
            for (int b = 0; b < bps; ++b) {
                const bool one = (s >> (bps - 1 - b)) & 1;
                double& m = one ? m1[b] : m0[b];
                m = max_log ? std::max(m, metric) : logaddexp(m, metric);
            }
        }
        for (int b = 0; b < bps; ++b) {
            double l = m0[b] - m1[b];
            out[k * prior_stride + b] = std::clamp(l, -kLlrClip, kLlrClip);
        }
    }
}

} // namespace

std::vector<double> demap_llr(const SymbolFrame& syms, const QamConstellation& c,
                              const std::vector<double>& noise_var_x,
                              const std::vector<double>& noise_var_y,
                              const std::vector<double>* prior_llrs, bool max_log) {
    const int bps = c.bits_per_symbol();
    const std::size_t n = syms.size();
    std::vector<double> llrs(2 * std::size_t(bps) * n);
    if (prior_llrs && prior_llrs->size() != llrs.size())
        throw ParameterError("demap_llr: prior length mismatch");
    const std::size_t stride = 2 * std::size_t(bps);
    const double* px = prior_llrs ? prior_llrs->data() : nullptr;
    const double* py = prior_llrs ? prior_llrs->data() + bps : nullptr;
    demap_pol(syms.x, c, noise_var_x, px, stride, max_log, llrs.data());
    demap_pol(syms.y, c, noise_var_y, py, stride, max_log, llrs.data() + bps);
    return llrs;
}

uint32_t nearest_label(cplx v, const QamConstellation& c) {
    uint32_t best = 0;
    double bd = std::norm(v - c.points[0]);
    for (int s = 1; s < c.order; ++s) {
        const double d = std::norm(v - c.points[s]);
        if (d < bd) {
            bd = d;
            best = uint32_t(s);
        }
    }
    return best;
}

cplx nearest_point(cplx v, const QamConstellation& c) {
    return c.points[nearest_label(v, c)];
}

SymbolFrame hard_decide(const SymbolFrame& rx, const QamConstellation& c) {
    SymbolFrame out;
    out.symbol_rate = rx.symbol_rate;
    out.guard = rx.guard;
    out.x.resize(rx.size());
    out.y.resize(rx.size());
    for (std::size_t k = 0; k < rx.size(); ++k) {
        out.x[k] = nearest_point(rx.x[k], c);
        out.y[k] = nearest_point(rx.y[k], c);
    }
    return out;
}

std::vector<uint8_t> hard_bits(const SymbolFrame& rx, const QamConstellation& c) {
    const int bps = c.bits_per_symbol();
    std::vector<uint8_t> bits(2 * std::size_t(bps) * rx.size());
    for (std::size_t k = 0; k < rx.size(); ++k) {
        const uint32_t lx = nearest_label(rx.x[k], c);
        const uint32_t ly = nearest_label(rx.y[k], c);
        for (int b = 0; b < bps; ++b) {
            bits[k * 2 * bps + b] = uint8_t((lx >> (bps - 1 - b)) & 1);
            bits[k * 2 * bps + bps + b] = uint8_t((ly >> (bps - 1 - b)) & 1);
        }
    }
    return bits;
}

} // namespace nlcsim
