#pragma once

#include <span>
#include <vector>

#include "drslf/data.hpp"
#include "drslf/factor_model.hpp"
#include "drslf/factor_state.hpp"
#include "drslf/param_vector.hpp"

namespace drslf {

// Matrix-free damped Gauss-Newton curvature of the double-regularized
// objective, linearized at a fixed point X.
//
// The context borrows `x` and `data`; both must outlive it and stay
// unchanged until it is rebuilt. It owns a |K|-length scratch buffer for
// the Jacobian-vector pass, so at most one HVP may be in flight per
// context.
class CurvatureContext {
public:
    CurvatureContext(const FactorState& x, const IndexedDataset& data, const Hyperparams& h);
    CurvatureContext(FactorState&&, const IndexedDataset&, const Hyperparams&) = delete;
    CurvatureContext(const FactorState&, IndexedDataset&&, const Hyperparams&) = delete;

    const FactorState& point() const noexcept { return *x_; }
    const IndexedDataset& data() const noexcept { return *data_; }
    const Hyperparams& hyperparams() const noexcept { return h_; }

    // (Jv)_{u,s} = sum_d (v_ud x_sd + x_ud v_sd), one entry per observation.
    std::vector<double> jacobian_vector(const ParamVector& v) const;
    void jacobian_vector(const ParamVector& v, std::span<double> out) const;

    // J^T (J v)
    ParamVector gn_hvp(const ParamVector& v);

    // lambda_r1 |K_u| eps / (x^2+eps)^{3/2} * v, elementwise.
    ParamVector reg_l1_hvp(const ParamVector& v) const;

    // lambda_r2 |K_u| * v, elementwise.
    ParamVector reg_l2_hvp(const ParamVector& v) const;

    // gn_hvp + reg_l1_hvp + reg_l2_hvp + gamma * v
    ParamVector damped_hvp(const ParamVector& v);
    void damped_hvp(const ParamVector& v, ParamVector& out);

private:
    void require_compatible(const ParamVector& v) const;
    void accumulate_gn(std::span<const double> jv, ParamVector& out) const;

    const FactorState* x_;
    const IndexedDataset* data_;
    Hyperparams h_;
    std::vector<double> scratch_;
    // Per-coordinate L1 curvature coefficient and the full diagonal
    // (L1 + L2 + damping) applied by damped_hvp.
    std::vector<double> l1_coeff_;
    std::vector<double> diagonal_;
};

}  // namespace drslf
