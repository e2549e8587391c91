#include "nlcsim/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace nlcsim {

namespace {

constexpr double kClipLinear = 1e6; // +60 dB per-term clip

void snr_pol(const cvec& rx, const cvec& truth, std::size_t lo, std::size_t hi,
             double& mean_ratio_db, double& ratio_sum_db, std::size_t& clipped) {
    double num = 0.0, den = 0.0, mean_ratio = 0.0;
    for (std::size_t k = lo; k < hi; ++k) {
        const double sp = std::norm(truth[k]);
        const double ep = std::norm(rx[k] - truth[k]);
        num += sp;
        den += ep;
        double r = (ep > 0.0) ? sp / ep : kClipLinear;
        if (r > kClipLinear) {
            r = kClipLinear;
            ++clipped;
        }
        mean_ratio += r;
    }
    const double n = double(hi - lo);
    mean_ratio_db = lin_to_db(mean_ratio / n);
    ratio_sum_db = lin_to_db(num / den);
}

} // namespace

SnrReport snr_estimate(const SymbolFrame& rx, const SymbolFrame& truth) {
    if (rx.size() != truth.size())
        throw ParameterError("snr_estimate: frames must be aligned and equal length");
    const std::size_t guard = std::max(rx.guard, truth.guard);
    const std::size_t n = rx.size();
    if (n < 2 * guard + 8)
        throw ParameterError("snr_estimate: too few symbols after guard exclusion");
    SnrReport rep;
    snr_pol(rx.x, truth.x, guard, n - guard, rep.mean_ratio_x_db, rep.ratio_sum_x_db,
            rep.clipped_terms);
    snr_pol(rx.y, truth.y, guard, n - guard, rep.mean_ratio_y_db, rep.ratio_sum_y_db,
            rep.clipped_terms);
    return rep;
}

BerResult ber_count(const std::vector<uint8_t>& decided,
                    const std::vector<uint8_t>& truth) {
    if (decided.size() != truth.size() || truth.empty())
        throw ParameterError("ber_count: sequences must be non-empty and equal length");
    BerResult r;
    r.bits = truth.size();
    for (std::size_t i = 0; i < truth.size(); ++i)
        r.errors += (decided[i] ^ truth[i]) & 1;
    r.ber = double(r.errors) / double(r.bits);
    // Wilson 95% interval
    const double z = 1.959963984540054;
    const double n = double(r.bits), p = r.ber, z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    r.ci_low = std::max(0.0, center - half);
    r.ci_high = std::min(1.0, center + half);
    return r;
}

double erfc_inv(double y) {
    if (!(y > 0.0) || !(y < 2.0))
        throw ParameterError("erfc_inv: argument must be in (0, 2)");
    if (y == 1.0) return 0.0;
    const bool flip = y > 1.0;
    if (flip) y = 2.0 - y;
    // Bracketed Newton on erfc(x) = y for y in (0, 1).
    double lo = 0.0, hi = 40.0;
    double x = std::sqrt(std::max(0.0, -std::log(y)));
    for (int it = 0; it < 100; ++it) {
        const double f = std::erfc(x) - y;
        if (f > 0.0)
            lo = x;
        else
            hi = x;
        const double dfdx = -2.0 / std::sqrt(M_PI) * std::exp(-x * x);
        double step = f / dfdx;
        double nx = x - step;
        if (!(nx > lo) || !(nx < hi)) nx = 0.5 * (lo + hi);
        if (std::abs(nx - x) <= 1e-15 * std::max(1.0, std::abs(x))) {
            x = nx;
            break;
        }
        x = nx;
    }
    return flip ? -x : x;
}

double q2_from_ber(double ber) {
    if (!(ber > 0.0) || !(ber < 0.5))
        throw ParameterError("q2_from_ber: ber must be in (0, 0.5)");
    const double q = std::sqrt(2.0) * erfc_inv(2.0 * ber);
    return 20.0 * std::log10(q);
}

std::string MetricRecord::to_line() const {
    char buf[512];
    std::snprintf(buf, sizeof(buf),
                  "%.4f %s %d %.6f %.6f %.6f %.10e %.10e %.6f %d %llu %llu",
                  launch_power_dbm, scheme.c_str(), channel_index, snr_x_db, snr_y_db,
                  snr_avg_db, pre_fec_ber, post_fec_ber, q2_db, iterations_used,
                  static_cast<unsigned long long>(seed),
                  static_cast<unsigned long long>(bit_count));
    return buf;
}

MetricRecord MetricRecord::from_line(const std::string& line) {
    MetricRecord r;
    std::istringstream is(line);
    unsigned long long seed = 0, bits = 0;
    if (!(is >> r.launch_power_dbm >> r.scheme >> r.channel_index >> r.snr_x_db >>
          r.snr_y_db >> r.snr_avg_db >> r.pre_fec_ber >> r.post_fec_ber >> r.q2_db >>
          r.iterations_used >> seed >> bits))
        throw ParameterError("MetricRecord: malformed line: " + line);
    r.seed = seed;
    r.bit_count = bits;
    return r;
}

std::string MetricRecord::header() {
    return "launch_power_dbm scheme channel_index snr_x_db snr_y_db snr_avg_db "
           "pre_fec_ber post_fec_ber q2_db iterations_used seed bit_count";
}

} // namespace nlcsim
