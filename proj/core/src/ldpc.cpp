#include "nlcsim/ldpc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace nlcsim {

namespace {
std::string data_dir() {
    if (const char* env = std::getenv("NLCSIM_DATA_DIR")) return env;
#ifdef NLCSIM_DATA_DIR
    return NLCSIM_DATA_DIR;
#else
    return "data";
#endif
}
} // namespace

LdpcCode LdpcCode::from_rate(int rate_num, int rate_den) {
    std::ostringstream name;
    name << data_dir() << "/ldpc_n64800_r" << rate_num << rate_den << ".txt";
    return load(rate_num, rate_den, name.str());
}

LdpcCode LdpcCode::load(int rate_num, int rate_den, const std::string& table_path) {
    LdpcCode code;
    code.rate_num_ = rate_num;
    code.rate_den_ = rate_den;
    if (!((rate_num == 5 && rate_den == 6) || (rate_num == 3 && rate_den == 4)))
        throw ParameterError("ldpc: supported rates are 5/6 and 3/4");
    code.info_len_ = kBlockLen * rate_num / rate_den;
    const int parity = kBlockLen - code.info_len_;
    code.q_ = parity / 360;

    std::ifstream in(table_path);
    if (!in) throw ConfigError("ldpc: cannot open parity table: " + table_path);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::vector<int> row;
        int v;
        while (ls >> v) {
            if (v < 0 || v >= parity)
                throw ConfigError("ldpc: table address out of range in " + table_path);
            row.push_back(v);
        }
        if (!row.empty()) code.table_.push_back(std::move(row));
    }
    if (int(code.table_.size()) != code.info_len_ / 360)
        throw ConfigError("ldpc: table has " + std::to_string(code.table_.size()) +
                          " rows, expected " + std::to_string(code.info_len_ / 360));
    code.build_adjacency();
    return code;
}

void LdpcCode::build_adjacency() {
    const int parity = parity_len();
    std::vector<std::vector<int>> checks(parity);
    for (int g = 0; g < int(table_.size()); ++g) {
        for (int j = 0; j < 360; ++j) {
            const int bit = g * 360 + j;
            for (int addr : table_[g])
                checks[(addr + std::size_t(j) * q_) % parity].push_back(bit);
        }
    }
    // Staircase parity: check i covers parity bits i and i-1.
    for (int i = 0; i < parity; ++i) {
        checks[i].push_back(info_len_ + i);
        if (i > 0) checks[i].push_back(info_len_ + i - 1);
    }
    chk_offset_.assign(parity + 1, 0);
    for (int i = 0; i < parity; ++i)
        chk_offset_[i + 1] = chk_offset_[i] + int(checks[i].size());
    chk_vars_.resize(chk_offset_.back());
    for (int i = 0; i < parity; ++i)
        std::copy(checks[i].begin(), checks[i].end(), chk_vars_.begin() + chk_offset_[i]);
}

std::vector<uint8_t> LdpcCode::encode(const std::vector<uint8_t>& info_bits) const {
    if (int(info_bits.size()) != info_len_)
        throw ParameterError("ldpc encode: expected " + std::to_string(info_len_) +
                             " info bits, got " + std::to_string(info_bits.size()));
    const int parity = parity_len();
    std::vector<uint8_t> p(parity, 0);
    for (int g = 0; g < int(table_.size()); ++g) {
        for (int j = 0; j < 360; ++j) {
            const uint8_t b = info_bits[g * 360 + j] & 1;
            if (!b) continue;
            for (int addr : table_[g]) p[(addr + std::size_t(j) * q_) % parity] ^= 1;
        }
    }
    for (int i = 1; i < parity; ++i) p[i] ^= p[i - 1];
    std::vector<uint8_t> cw(kBlockLen);
    std::copy(info_bits.begin(), info_bits.end(), cw.begin());
    std::copy(p.begin(), p.end(), cw.begin() + info_len_);
    return cw;
}

bool LdpcCode::check_parity(const std::vector<uint8_t>& codeword) const {
    if (int(codeword.size()) != kBlockLen)
        throw ParameterError("ldpc: codeword must have 64800 bits");
    const int parity = parity_len();
    for (int c = 0; c < parity; ++c) {
        uint8_t s = 0;
        for (int e = chk_offset_[c]; e < chk_offset_[c + 1]; ++e)
            s ^= codeword[chk_vars_[e]] & 1;
        if (s) return false;
    }
    return true;
}

CodewordBlock LdpcCode::decode(const std::vector<double>& llrs, int max_iters,
                               bool sum_product) const {
    if (int(llrs.size()) != kBlockLen)
        throw ParameterError("ldpc decode: expected 64800 LLRs");
    constexpr double kClip = 30.0;
    constexpr double kMinSumScale = 0.75;
    const int parity = parity_len();
    const int num_edges = chk_offset_.back();

    std::vector<double> chan(kBlockLen);
    for (int v = 0; v < kBlockLen; ++v) chan[v] = std::clamp(llrs[v], -kClip, kClip);
    std::vector<double> post = chan;
    std::vector<double> msg(num_edges, 0.0); // check-to-variable

    CodewordBlock out;
    out.bits.resize(kBlockLen);

    auto harden = [&] {
        for (int v = 0; v < kBlockLen; ++v) out.bits[v] = post[v] < 0.0 ? 1 : 0;
    };
    harden();
    if (check_parity(out.bits)) {
        out.decode_status = DecodeStatus::kConverged;
        out.iteration_count = 0;
        out.llrs = post;
        return out;
    }

    std::vector<double> in_buf;
    for (int iter = 1; iter <= max_iters; ++iter) {
        for (int c = 0; c < parity; ++c) {
            const int lo = chk_offset_[c], hi = chk_offset_[c + 1];
            if (sum_product) {
                // tanh-domain product, leave-one-out via division with floor
                double sign = 1.0;
                in_buf.resize(hi - lo);
                for (int e = lo; e < hi; ++e) {
                    double t = std::tanh(0.5 * (post[chk_vars_[e]] - msg[e]));
                    t = std::clamp(t, -0.999999999999, 0.999999999999);
                    in_buf[e - lo] = t;
                    sign *= (t < 0) ? -1.0 : 1.0;
                }
                for (int e = lo; e < hi; ++e) {
                    double prod = 1.0;
                    for (int e2 = lo; e2 < hi; ++e2)
                        if (e2 != e) prod *= in_buf[e2 - lo];
                    const double v = chk_vars_[e];
                    const double nm = 2.0 * std::atanh(std::clamp(prod, -0.999999999999,
                                                                  0.999999999999));
                    post[int(v)] += nm - msg[e];
                    msg[e] = nm;
                }
            } else {
                // scaled min-sum: track the two smallest magnitudes
                double min1 = 1e300, min2 = 1e300;
                int arg1 = -1;
                double sign_all = 1.0;
                for (int e = lo; e < hi; ++e) {
                    const double in = post[chk_vars_[e]] - msg[e];
                    const double m = std::abs(in);
                    sign_all *= (in < 0) ? -1.0 : 1.0;
                    if (m < min1) {
                        min2 = min1;
                        min1 = m;
                        arg1 = e;
                    } else if (m < min2) {
                        min2 = m;
                    }
                }
                for (int e = lo; e < hi; ++e) {
                    const double in = post[chk_vars_[e]] - msg[e];
                    const double s = sign_all * ((in < 0) ? -1.0 : 1.0);
                    const double mag = (e == arg1) ? min2 : min1;
                    const double nm = kMinSumScale * s * mag;
                    post[chk_vars_[e]] += nm - msg[e];
                    msg[e] = nm;
                }
            }
        }
        for (int v = 0; v < kBlockLen; ++v) post[v] = std::clamp(post[v], -1e12, 1e12);
        harden();
        out.iteration_count = iter;
        if (check_parity(out.bits)) {
            out.decode_status = DecodeStatus::kConverged;
            out.llrs = std::move(post);
            return out;
        }
    }
    out.decode_status = DecodeStatus::kMaxItersReached;
    out.llrs = std::move(post);
    return out;
}

} // namespace nlcsim
