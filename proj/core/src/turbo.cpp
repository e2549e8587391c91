#include "nlcsim/turbo.hpp"

#include "nlcsim/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace nlcsim {

std::string scheme_name(SchemeKind s) {
    switch (s) {
        case SchemeKind::kNone: return "none";
        case SchemeKind::kConventional: return "conventional";
        case SchemeKind::kFecAssisted: return "fec-assisted";
        case SchemeKind::kGenie: return "genie";
    }
    return "?";
}

SchemeKind scheme_from_name(const std::string& name) {
    if (name == "none") return SchemeKind::kNone;
    if (name == "conventional") return SchemeKind::kConventional;
    if (name == "fec-assisted") return SchemeKind::kFecAssisted;
    if (name == "genie") return SchemeKind::kGenie;
    throw ParameterError("unknown scheme: " + name);
}

int FrameCoding::codewords_per_frame(std::size_t frame_symbols) const {
    const std::size_t bits = 2 * std::size_t(constellation->bits_per_symbol()) *
                             frame_symbols;
    return int(bits / std::size_t(LdpcCode::kBlockLen));
}

void FrameCoding::validate(std::size_t frame_symbols) const {
    if (!code || !constellation) throw ParameterError("coding: missing code/constellation");
    const std::size_t bits = 2 * std::size_t(constellation->bits_per_symbol()) *
                             frame_symbols;
    if (bits % std::size_t(LdpcCode::kBlockLen) != 0)
        throw ParameterError("coding: frame bits must cover whole codewords");
    if (interleaver.rows != 2 * constellation->bits_per_symbol())
        throw ParameterError("coding: interleaver rows must equal 2 x bits-per-symbol");
}

SymbolFrame regenerate_symbols(const std::vector<std::vector<uint8_t>>& codewords,
                               const QamConstellation& c, const Interleaver& il,
                               double symbol_rate) {
    if (codewords.empty()) throw ParameterError("regenerate: no codewords");
    std::vector<uint8_t> sym_bits;
    sym_bits.reserve(codewords.size() * std::size_t(LdpcCode::kBlockLen));
    for (const auto& cw : codewords) {
        if (int(cw.size()) != LdpcCode::kBlockLen)
            throw ParameterError("regenerate: codeword length mismatch");
        auto il_bits = il.interleave(cw);
        sym_bits.insert(sym_bits.end(), il_bits.begin(), il_bits.end());
    }
    return map_symbols(sym_bits, c, symbol_rate);
}

namespace {

struct BlockState {
    std::vector<uint8_t> hard;   // current full-codeword hard estimate
    std::vector<double> post;    // posterior LLRs (codeword domain)
    bool converged = false;
    int last_iters = 0;
};

/// Decision-directed noise variance per polarization against the nearest
/// constellation points, guard excluded.
void residual_variance(const SymbolFrame& f, const QamConstellation& c,
                       double& vx, double& vy) {
    const std::size_t g = std::min(f.guard, f.size() / 4);
    double ax = 0.0, ay = 0.0;
    std::size_t cnt = 0;
    for (std::size_t k = g; k + g < f.size(); ++k) {
        ax += std::norm(f.x[k] - nearest_point(f.x[k], c));
        ay += std::norm(f.y[k] - nearest_point(f.y[k], c));
        ++cnt;
    }
    vx = std::max(ax / double(cnt), 1e-6);
    vy = std::max(ay / double(cnt), 1e-6);
}

} // namespace

SchemeResult run_scheme(const SymbolFrame& rx, const SymbolFrame& truth,
                        const CouplingMatrix& matrix, const FrameCoding& coding,
                        const SchemeConfig& cfg) {
    coding.validate(rx.size());
    const auto& constellation = *coding.constellation;
    const auto& code = *coding.code;
    const int bps = constellation.bits_per_symbol();
    const int ncw = coding.codewords_per_frame(rx.size());
    const std::size_t bits_per_cw = LdpcCode::kBlockLen;
    const bool have_truth = !truth.source_bits.empty();
    if (cfg.scheme == SchemeKind::kGenie && truth.size() != rx.size())
        throw ParameterError("genie scheme requires aligned ground truth");

    const int max_iters =
        (cfg.scheme == SchemeKind::kFecAssisted) ? std::max(1, cfg.max_turbo_iters) : 1;

    SchemeResult res;
    std::vector<BlockState> blocks(ncw);
    std::vector<double> priors; // symbol-domain priors for the next demap
    bool have_priors = false;

    SymbolFrame candidates;
    for (int iter = 1; iter <= max_iters; ++iter) {
        // --- candidate selection -------------------------------------------
        if (cfg.scheme == SchemeKind::kGenie) {
            candidates = truth;
        } else if (cfg.scheme != SchemeKind::kNone) {
            if (iter == 1) {
                candidates = hard_decide(rx, constellation);
            } else {
                std::vector<std::vector<uint8_t>> cws(blocks.size());
                for (std::size_t b = 0; b < blocks.size(); ++b) cws[b] = blocks[b].hard;
                candidates = regenerate_symbols(cws, constellation, coding.interleaver,
                                                rx.symbol_rate);
            }
        }

        // --- NLC pass on the original frame --------------------------------
        SymbolFrame eq = rx;
        if (cfg.scheme != SchemeKind::kNone) {
            const NliEstimate nli = estimate_nli(candidates, matrix,
                                                 cfg.include_c00_phase);
            eq = compensate(rx, nli);
        }

        double rls_res = 0.0;
        if (cfg.rls_enabled && cfg.scheme != SchemeKind::kNone) {
            DecisionSource src;
            if (cfg.scheme == SchemeKind::kGenie) {
                src.mode = RlsMode::kGenie;
                src.reference = &truth;
            } else if (cfg.scheme == SchemeKind::kFecAssisted && iter > 1) {
                src.mode = RlsMode::kFecFeedback;
                src.reference = &candidates;
            } else {
                src.mode = RlsMode::kHardDecision;
            }
            src.constellation = &constellation;
            eq = rls_equalize_frame(eq, src, cfg.rls, &rls_res);
        }

        // --- demap ----------------------------------------------------------
        double vx, vy;
        residual_variance(eq, constellation, vx, vy);
        std::vector<double> llrs =
            demap_llr(eq, constellation, {vx}, {vy},
                      have_priors && cfg.demap_posterior_priors ? &priors : nullptr);

        // --- decode per codeword -------------------------------------------
        constexpr double kPriorClip = 30.0;
        std::vector<double> next_priors(llrs.size());
        int converged = 0, dec_iters = 0;
        for (int b = 0; b < ncw; ++b) {
            auto& blk = blocks[b];
            std::vector<double> prior_cw(bits_per_cw);
            if (blk.converged) {
                // frozen block: saturated priors from the settled bits
                for (std::size_t i = 0; i < bits_per_cw; ++i)
                    prior_cw[i] = blk.hard[i] ? -kPriorClip : kPriorClip;
                ++converged;
            } else {
                std::vector<double> cw_llrs(
                    llrs.begin() + std::size_t(b) * bits_per_cw,
                    llrs.begin() + std::size_t(b + 1) * bits_per_cw);
                cw_llrs = coding.interleaver.deinterleave_llrs(cw_llrs);
                CodewordBlock out = code.decode(cw_llrs, cfg.ldpc_iters,
                                                cfg.ldpc_sum_product);
                blk.hard = out.bits;
                blk.post = out.llrs;
                blk.last_iters = out.iteration_count;
                dec_iters = std::max(dec_iters, out.iteration_count);
                if (out.decode_status == DecodeStatus::kConverged) {
                    blk.converged = true;
                    ++converged;
                }
                for (std::size_t i = 0; i < bits_per_cw; ++i) {
                    double p = blk.post[i];
                    if (cfg.extrinsic_priors) p -= cw_llrs[i];
                    prior_cw[i] = std::clamp(p, -kPriorClip, kPriorClip);
                }
            }
            auto prior_sym = coding.interleaver.interleave_llrs(prior_cw);
            std::copy(prior_sym.begin(), prior_sym.end(),
                      next_priors.begin() + std::size_t(b) * bits_per_cw);
        }
        priors = std::move(next_priors);
        have_priors = true;

        // --- trace ----------------------------------------------------------
        TurboIterRecord rec;
        rec.converged_blocks = converged;
        rec.decoder_iterations = dec_iters;
        rec.rls_residual = rls_res;
        if (have_truth && truth.size() == eq.size()) {
            const SnrReport snr = snr_estimate(eq, truth);
            rec.snr_x_db = snr.ratio_sum_x_db;
            rec.snr_y_db = snr.ratio_sum_y_db;
            rec.pre_fec_ber =
                ber_count(hard_bits(eq, constellation), truth.source_bits).ber;
            std::vector<uint8_t> info;
            info.reserve(std::size_t(ncw) * code.info_len());
            for (const auto& blk : blocks)
                info.insert(info.end(), blk.hard.begin(),
                            blk.hard.begin() + code.info_len());
            if (!coding.tx_info_bits.empty())
                rec.post_fec_ber = ber_count(info, coding.tx_info_bits).ber;
        }
        res.trace.iters.push_back(rec);
        res.trace.iterations_used = iter;
        res.final_frame = std::move(eq);

        if (cfg.stop_on_converged && converged == ncw) {
            res.trace.all_converged = true;
            break;
        }
    }

    res.decoded_info_bits.reserve(std::size_t(ncw) * code.info_len());
    res.decoded_codeword_bits.reserve(std::size_t(ncw) * bits_per_cw);
    for (const auto& blk : blocks) {
        res.decoded_info_bits.insert(res.decoded_info_bits.end(), blk.hard.begin(),
                                     blk.hard.begin() + code.info_len());
        res.decoded_codeword_bits.insert(res.decoded_codeword_bits.end(),
                                         blk.hard.begin(), blk.hard.end());
    }

    return res;
}

} // namespace nlcsim
