#pragma once

#include <cstddef>
#include <functional>

#include "drslf/param_vector.hpp"

namespace drslf {

// out = A * in. A must be symmetric positive definite.
using LinearOperator = std::function<void(const ParamVector& in, ParamVector& out)>;

struct CgResult {
    ParamVector delta;
    std::size_t iterations = 0;
    // max_i |(A delta + g)_i|, recomputed from delta after the last step
    double final_residual_inf = 0.0;
    bool converged = false;
    // <g, delta> + 1/2 <delta, A delta>, the change of the local quadratic model
    double model_change = 0.0;
};

// Conjugate gradient on A * delta = -g from delta = 0. Stops once the
// max-norm residual is <= tau or after max_iters steps and returns the last
// iterate. Throws SolverError on non-finite values or when a search
// direction has <p, A p> <= 0.
CgResult cg_solve(const LinearOperator& apply, const ParamVector& g, double tau,
                  std::size_t max_iters);

}  // namespace drslf
