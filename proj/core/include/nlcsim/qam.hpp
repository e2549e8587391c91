#pragma once

#include "nlcsim/types.hpp"

namespace nlcsim {

/// Square Gray-labeled QAM with unit average energy. Labels split per axis:
/// the first half of the bits select the in-phase level, the second half the
/// quadrature level, each axis Gray coded so that any I/Q neighbor differs in
/// exactly one bit.
struct QamConstellation {
    int order = 64;                  // 16 or 64
    cvec points;                     // indexed by label integer (MSB-first)
    std::vector<uint32_t> labels;    // labels[i] == i (kept for clarity)

    int bits_per_symbol() const;
    static QamConstellation make(int order);
};

/// Map a slot-major bit stream (bits for x[k], then y[k], per slot) to a
/// dual-polarization symbol frame.
SymbolFrame map_symbols(const std::vector<uint8_t>& bits,
                        const QamConstellation& c, double symbol_rate);

/// Exact bit LLRs under circular Gaussian noise, positive means bit 0 more
/// likely. noise_var holds one entry per symbol slot or a single broadcast
/// value, per polarization. Optional prior LLRs (same layout as the output)
/// enter as symbol priors. max_log switches the exact log-sum-exp to the
/// max-log approximation.
std::vector<double> demap_llr(const SymbolFrame& syms, const QamConstellation& c,
                              const std::vector<double>& noise_var_x,
                              const std::vector<double>& noise_var_y,
                              const std::vector<double>* prior_llrs = nullptr,
                              bool max_log = false);

/// Per-symbol minimum-Euclidean-distance decisions. Ties break to the lowest
/// label index.
SymbolFrame hard_decide(const SymbolFrame& rx, const QamConstellation& c);

cplx nearest_point(cplx v, const QamConstellation& c);
uint32_t nearest_label(cplx v, const QamConstellation& c);

/// Hard bits (slot-major) from per-symbol nearest-point decisions.
std::vector<uint8_t> hard_bits(const SymbolFrame& rx, const QamConstellation& c);

} // namespace nlcsim
