#include "nlcsim/rls.hpp"

#include <cmath>

namespace nlcsim {

void DecisionSource::validate() const {
    if (mode == RlsMode::kGenie && !reference)
        throw ParameterError("rls: genie mode requires a ground-truth frame");
    if (mode == RlsMode::kFecFeedback && !reference)
        throw ParameterError("rls: fec-feedback mode requires regenerated symbols");
    if (mode == RlsMode::kHardDecision && !constellation)
        throw ParameterError("rls: hard-decision mode requires a constellation");
}

RlsState rls_init(int num_taps, double lambda, double delta) {
    if (num_taps < 1) throw ParameterError("rls_init: num_taps must be >= 1");
    if (!(lambda > 0.0) || lambda > 1.0)
        throw ParameterError("rls_init: lambda must be in (0, 1]");
    if (!(delta > 0.0)) throw ParameterError("rls_init: delta must be positive");
    RlsState st;
    st.num_taps = num_taps;
    st.lambda = lambda;
    st.decision_delay = (num_taps - 1) / 2;
    st.h_xx = Eigen::VectorXcd::Zero(num_taps);
    st.h_xy = Eigen::VectorXcd::Zero(num_taps);
    st.h_yx = Eigen::VectorXcd::Zero(num_taps);
    st.h_yy = Eigen::VectorXcd::Zero(num_taps);
    st.h_xx(st.decision_delay) = 1.0; // identity pass-through with delay d
    st.h_yy(st.decision_delay) = 1.0;
    st.s_x = Eigen::MatrixXcd::Identity(num_taps, num_taps) / delta;
    st.s_y = Eigen::MatrixXcd::Identity(num_taps, num_taps) / delta;
    return st;
}

namespace {

void update_s(Eigen::MatrixXcd& s, const Eigen::VectorXcd& a, double lambda) {
    const Eigen::VectorXcd sa = s * a;
    const cplx denom = lambda + a.dot(sa); // a^H S a (dot conjugates lhs)
    s = (s - (sa * sa.adjoint()) / denom) / lambda;
    // Hermitian symmetrization limits rounding drift on long frames.
    s = 0.5 * (s + s.adjoint()).eval();
}

} // namespace

RlsOutputs rls_step(RlsState& state, const Eigen::VectorXcd& a_x,
                    const Eigen::VectorXcd& a_y, cplx desired_x, cplx desired_y) {
    if (a_x.size() != state.num_taps || a_y.size() != state.num_taps)
        throw ParameterError("rls_step: window length must equal num_taps");
    RlsOutputs o;
    o.out_x = state.h_xx.dot(a_x) + state.h_xy.dot(a_y); // h^H a
    o.out_y = state.h_yx.dot(a_x) + state.h_yy.dot(a_y);
    o.err_x = desired_x - o.out_x;
    o.err_y = desired_y - o.out_y;

    update_s(state.s_x, a_x, state.lambda);
    update_s(state.s_y, a_y, state.lambda);
    const Eigen::VectorXcd kx = state.s_x * a_x;
    const Eigen::VectorXcd ky = state.s_y * a_y;
    state.h_xx += std::conj(o.err_x) * kx;
    state.h_xy += std::conj(o.err_x) * ky;
    state.h_yx += std::conj(o.err_y) * kx;
    state.h_yy += std::conj(o.err_y) * ky;
    ++state.updates;

    const double trace = state.s_x.real().trace() + state.s_y.real().trace();
    if (!std::isfinite(trace) || std::abs(trace) > 1e12) state.diverged = true;
    return o;
}

SymbolFrame rls_equalize_frame(const SymbolFrame& frame, const DecisionSource& source,
                               const RlsParams& params, double* residual) {
    source.validate();
    if (source.reference && source.reference->size() != frame.size())
        throw ParameterError("rls: reference frame length mismatch");
    const int n = params.num_taps;
    const int d = (n - 1) / 2;

    double pin = 0.0;
    for (std::size_t k = 0; k < frame.size(); ++k)
        pin += std::norm(frame.x[k]) + std::norm(frame.y[k]);
    pin /= std::max<std::size_t>(1, 2 * frame.size());
    const double delta = params.delta > 0.0 ? params.delta : 0.01 * std::max(pin, 1e-12);

    RlsState st = rls_init(n, params.lambda, delta);
    SymbolFrame out = frame;
    out.guard = std::max(frame.guard + std::size_t(d), params.warmup);

    Eigen::VectorXcd ax(n), ay(n);
    double err_acc = 0.0;
    std::size_t err_cnt = 0;
    // At step k the window holds received symbols [k, k-1, ..., k-N+1]
    // (newest first) and the filter estimates the symbol at k - d.
    for (std::size_t k = std::size_t(n) - 1; k < frame.size(); ++k) {
        for (int i = 0; i < n; ++i) {
            ax(i) = frame.x[k - std::size_t(i)];
            ay(i) = frame.y[k - std::size_t(i)];
        }
        const std::size_t tgt = k - std::size_t(d);
        cplx dx, dy;
        switch (source.mode) {
            case RlsMode::kGenie:
            case RlsMode::kFecFeedback:
                dx = source.reference->x[tgt];
                dy = source.reference->y[tgt];
                break;
            case RlsMode::kHardDecision: {
                // decision-directed: decide on the current filter output
                const cplx ox = st.h_xx.dot(ax) + st.h_xy.dot(ay);
                const cplx oy = st.h_yx.dot(ax) + st.h_yy.dot(ay);
                dx = nearest_point(ox, *source.constellation);
                dy = nearest_point(oy, *source.constellation);
                break;
            }
        }
        const RlsOutputs o = rls_step(st, ax, ay, dx, dy);
        out.x[tgt] = o.out_x;
        out.y[tgt] = o.out_y;
        if (k >= params.warmup) {
            err_acc += std::norm(o.err_x) + std::norm(o.err_y);
            err_cnt += 2;
        }
        if (st.diverged) {
            st = rls_init(n, params.lambda, delta);
            st.reinits += 1;
        }
    }
    if (residual) *residual = err_cnt ? err_acc / double(err_cnt) : 0.0;
    return out;
}

} // namespace nlcsim
