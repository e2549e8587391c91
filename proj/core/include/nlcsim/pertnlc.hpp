#pragma once

#include "nlcsim/channel.hpp"
#include "nlcsim/qam.hpp"
#include "nlcsim/rrc.hpp"
#include "nlcsim/types.hpp"

#include <string>

namespace nlcsim {

struct CouplingEntry {
    int m = 0;
    int n = 0;
    cplx c;
};

/// Pruned first-order intra-channel coupling coefficients C(m,n) over
/// m,n in [-L, L]. Entries are kept when |C(m,n)| >= cutoff x |C(0,0)| and
/// stored sorted by |C| descending; (0,0) is always retained.
struct CouplingMatrix {
    int memory_L = 80;
    double cutoff_db = -16.0;
    cplx scale_calibration = 1.0;
    double p0 = 1.0; // pulse peak power (W)
    std::vector<CouplingEntry> entries;
    cplx c00;

    std::size_t retained_count() const { return entries.size(); }
    const cplx* find(int m, int n) const;
    void save(const std::string& path) const;
    static CouplingMatrix load(const std::string& path);
};

/// Additive/multiplicative first-order NLI distortion per symbol.
/// The first and last L symbols use zero-padded candidates.
struct NliEstimate {
    cvec delta_x, delta_y; // additive distortion
    std::vector<double> phi_x, phi_y; // phase distortion (radians)
    std::size_t edge_guard = 0; // symbols at each end computed from padding
};

/// Numerically evaluate the first-order pulse-collision overlap integral for
/// the (dispersion-uncompensated) link, Gaussian pulse of variance matched to
/// the RRC spectrum, integrated per span and summed coherently across spans.
/// quad_points_per_span controls the Gauss-Legendre resolution.
CouplingMatrix generate_coupling_matrix(const LinkConfig& link,
                                        const RrcFilterSpec& pulse,
                                        double symbol_rate, int memory_L,
                                        double cutoff_db,
                                        int quad_points_per_span = 32);

/// Single coefficient at full precision (generation oracle hook).
cplx coupling_coefficient(const LinkConfig& link, const RrcFilterSpec& pulse,
                          double symbol_rate, int m, int n,
                          int quad_points_per_span);

/// Least-squares complex scale minimizing |rx - tx - s * NLI_unit(tx)|^2
/// over the frame interior. Returns the updated matrix; status reports the
/// residual-energy ratio after/before. Degenerate (zero NLI energy) inputs
/// leave the scale unchanged.
struct CalibrationReport {
    cplx scale = 1.0;
    double residual_ratio = 1.0;   // ||r - s u||^2 / ||r||^2
    bool skipped = false;
};
CalibrationReport calibrate_scale(CouplingMatrix& matrix, const SymbolFrame& rx,
                                  const SymbolFrame& tx_truth);

/// Evaluate the additive and phase distortions from candidate symbols.
/// include_c00_phase controls whether the C(0,0) self-term enters the phase
/// (it can also be treated as a constant rotation absorbed downstream).
NliEstimate estimate_nli(const SymbolFrame& candidates, const CouplingMatrix& matrix,
                         bool include_c00_phase = true);

/// Remove the estimated distortion: out = rx * exp(-j phi) - delta.
SymbolFrame compensate(const SymbolFrame& rx, const NliEstimate& nli);

/// Linearized unit-scale distortion delta + j*sigma*tx used by the scale
/// calibration (exposed for tests).
void nli_unit_vector(const SymbolFrame& tx, const CouplingMatrix& matrix,
                     cvec& ux, cvec& uy);

} // namespace nlcsim
