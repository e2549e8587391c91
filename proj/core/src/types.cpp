#include "nlcsim/types.hpp"

#include <cmath>

namespace nlcsim {

void DualPolWaveform::validate() const {
    if (x.empty() || x.size() != y.size())
        throw ParameterError("waveform polarizations must be non-empty and equal length");
    if (!(sample_rate > 0.0))
        throw ParameterError("waveform sample_rate must be positive");
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!std::isfinite(x[i].real()) || !std::isfinite(x[i].imag()) ||
            !std::isfinite(y[i].real()) || !std::isfinite(y[i].imag()))
            throw ParameterError("waveform contains non-finite samples");
    }
}

double DualPolWaveform::mean_power() const {
    const std::size_t n = x.size();
    std::size_t lo = guard, hi = n > guard ? n - guard : 0;
    if (lo >= hi) { lo = 0; hi = n; } // guard covers everything: fall back to all samples
    double acc = 0.0;
    for (std::size_t i = lo; i < hi; ++i)
        acc += std::norm(x[i]) + std::norm(y[i]);
    return acc / double(hi - lo);
}

void SymbolFrame::validate(std::size_t bits_per_symbol) const {
    if (x.size() != y.size())
        throw ParameterError("symbol frame polarizations must have equal length");
    if (bits_per_symbol > 0 && !source_bits.empty() &&
        source_bits.size() != 2 * bits_per_symbol * x.size())
        throw ParameterError("source_bits length must be bits-per-symbol x symbol count per polarization");
}

} // namespace nlcsim
