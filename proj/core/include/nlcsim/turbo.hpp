#pragma once

#include "nlcsim/interleaver.hpp"
#include "nlcsim/ldpc.hpp"
#include "nlcsim/pertnlc.hpp"
#include "nlcsim/qam.hpp"
#include "nlcsim/rls.hpp"
#include "nlcsim/types.hpp"

namespace nlcsim {

enum class SchemeKind { kNone, kConventional, kFecAssisted, kGenie };

std::string scheme_name(SchemeKind s);
SchemeKind scheme_from_name(const std::string& name);

struct SchemeConfig {
    SchemeKind scheme = SchemeKind::kConventional;
    int max_turbo_iters = 5;
    bool rls_enabled = false;
    bool stop_on_converged = true;
    // Feed decoder posteriors back into the demapper as symbol priors on
    // later iterations; extrinsic_priors subtracts the previous channel LLRs.
    bool demap_posterior_priors = true;
    bool extrinsic_priors = false;
    bool include_c00_phase = true;
    int ldpc_iters = 10;
    bool ldpc_sum_product = false;
    RlsParams rls;
};

/// Coding context tying a symbol frame to its codewords.
struct FrameCoding {
    const LdpcCode* code = nullptr;
    const QamConstellation* constellation = nullptr;
    Interleaver interleaver;
    std::vector<uint8_t> tx_info_bits; // empty when truth is unavailable

    int codewords_per_frame(std::size_t frame_symbols) const;
    void validate(std::size_t frame_symbols) const;
};

struct TurboIterRecord {
    double snr_x_db = 0.0, snr_y_db = 0.0;
    double pre_fec_ber = -1.0;  // -1: truth unavailable
    double post_fec_ber = -1.0;
    int converged_blocks = 0;
    int decoder_iterations = 0;
    double rls_residual = 0.0;
};

struct TurboTrace {
    std::vector<TurboIterRecord> iters;
    int iterations_used = 0;
    bool all_converged = false;
};

struct SchemeResult {
    SymbolFrame final_frame;                 // after NLC (+RLS) of last iteration
    std::vector<uint8_t> decoded_info_bits;  // concatenated across codewords
    std::vector<uint8_t> decoded_codeword_bits;
    TurboTrace trace;
};

/// Map decoder hard codeword estimates back to a symbol frame (interleave,
/// Gray map); defined for non-converged blocks as well.
SymbolFrame regenerate_symbols(const std::vector<std::vector<uint8_t>>& codewords,
                               const QamConstellation& c, const Interleaver& il,
                               double symbol_rate);

/// Run one receiver scheme on an aligned 1-sample/symbol frame.
///  - conventional: hard-decision candidates, one NLC pass, decode once
///    (identical to fec-assisted capped at one iteration)
///  - fec-assisted: iterate NLC <-> decoding, candidates regenerated from the
///    decoder each pass, converged blocks frozen
///  - genie: candidates are the true transmitted symbols
///  - none: demap and decode the input directly
/// truth may have empty source_bits (BER fields then stay unset); genie
/// requires full truth.
SchemeResult run_scheme(const SymbolFrame& rx, const SymbolFrame& truth,
                        const CouplingMatrix& matrix, const FrameCoding& coding,
                        const SchemeConfig& cfg);

} // namespace nlcsim
