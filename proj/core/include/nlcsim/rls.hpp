#pragma once

#include "nlcsim/qam.hpp"
#include "nlcsim/types.hpp"

#include <Eigen/Dense>

namespace nlcsim {

/// Complex 2x2 recursive-least-squares equalizer. Filter outputs are
/// h^H a per branch; S tracks the inverse deterministic correlation matrix
/// per polarization with forgetting factor lambda.
struct RlsState {
    int num_taps = 5;
    double lambda = 0.99;
    int decision_delay = 2; // (N-1)/2
    Eigen::VectorXcd h_xx, h_xy, h_yx, h_yy;
    Eigen::MatrixXcd s_x, s_y;
    bool diverged = false;
    std::size_t updates = 0;
    std::size_t reinits = 0;
};

RlsState rls_init(int num_taps, double lambda, double delta);

/// One update: outputs from the current taps, then S and tap updates from
/// the error against `desired`. Window entries are newest-first.
struct RlsOutputs {
    cplx out_x, out_y;
    cplx err_x, err_y;
};
RlsOutputs rls_step(RlsState& state, const Eigen::VectorXcd& a_x,
                    const Eigen::VectorXcd& a_y, cplx desired_x, cplx desired_y);

enum class RlsMode { kHardDecision, kFecFeedback, kGenie };

struct DecisionSource {
    RlsMode mode = RlsMode::kHardDecision;
    const SymbolFrame* reference = nullptr; // genie truth or decoder-regenerated
    const QamConstellation* constellation = nullptr; // for hard decisions

    void validate() const;
};

struct RlsParams {
    int num_taps = 5;
    double lambda = 0.99;
    double delta = 0.0; // 0: auto (0.01 x input power)
    std::size_t warmup = 512; // symbols excluded from the output guard
};

/// Sequential decision-directed pass over a frame; outputs are
/// delay-compensated to the input indices. Residual error power is reported
/// via last_residual.
SymbolFrame rls_equalize_frame(const SymbolFrame& frame, const DecisionSource& source,
                               const RlsParams& params, double* residual = nullptr);

} // namespace nlcsim
