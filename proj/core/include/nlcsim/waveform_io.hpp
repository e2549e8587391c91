#pragma once

#include "nlcsim/types.hpp"

#include <string>

namespace nlcsim {

/// Thrown on malformed waveform files; message carries byte-offset context.
struct IngestError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// DPWF binary format (little-endian):
///   magic "DPWF", version u32, sample_rate f64, length u64, power_ref_dbm f64,
///   then `length` interleaved f64 quadruples (Ix, Qx, Iy, Qy).
/// Round trip is bit-exact.
void write_dpwf(const std::string& path, const DualPolWaveform& w,
                double power_ref_dbm);

struct DpwfFile {
    DualPolWaveform wave;
    uint32_t version = 1;
    double power_ref_dbm = 0.0;
};

DpwfFile read_dpwf(const std::string& path);

} // namespace nlcsim
