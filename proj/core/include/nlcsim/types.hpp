#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace nlcsim {

using cplx = std::complex<double>;
using cvec = std::vector<cplx>;

/// Thrown when an operation is called with arguments that violate its
/// preconditions (bad filter spec, mismatched lengths, ...).
struct ParameterError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Thrown when a configuration is internally inconsistent (aliasing grid,
/// step longer than span, ...).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Sampled dual-polarization complex baseband field. Samples carry absolute
/// units: |sample|^2 is instantaneous power in watts.
struct DualPolWaveform {
    cvec x;
    cvec y;
    double sample_rate = 0.0;        // samples/second
    double center_freq_offset = 0.0; // Hz relative to the WDM grid center
    // Number of samples at each end contaminated by filter transients or
    // circular wrap; excluded from power/metric computations.
    std::size_t guard = 0;

    std::size_t size() const { return x.size(); }
    void validate() const;
    /// Mean power (both polarizations), guard samples excluded.
    double mean_power() const;
};

/// Dual-polarization symbol sequence at 1 sample/symbol.
struct SymbolFrame {
    cvec x;
    cvec y;
    double symbol_rate = 0.0; // baud
    // Optional transmitted-bit record, slot-major: for slot k the
    // bits_per_symbol labels of x[k] followed by those of y[k].
    std::vector<uint8_t> source_bits;
    // Symbols at each end excluded from metric computations.
    std::size_t guard = 0;

    std::size_t size() const { return x.size(); }
    void validate(std::size_t bits_per_symbol = 0) const;
};

inline double dbm_to_watt(double dbm) { return 1e-3 * std::pow(10.0, dbm / 10.0); }
inline double watt_to_dbm(double w) { return 10.0 * std::log10(w / 1e-3); }
inline double db_to_lin(double db) { return std::pow(10.0, db / 10.0); }
inline double lin_to_db(double lin) { return 10.0 * std::log10(lin); }

} // namespace nlcsim
