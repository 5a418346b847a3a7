#include "drslf/cg_solver.hpp"

#include <cmath>
#include <string>

#include "drslf/error.hpp"
#include "drslf/format.hpp"

namespace drslf {

CgResult cg_solve(const LinearOperator& apply, const ParamVector& g, double tau,
                  std::size_t max_iters) {
    if (!(tau > 0.0)) throw InvalidArgument("cg_solve: tau must be > 0");
    if (max_iters < 1) throw InvalidArgument("cg_solve: max_iters must be >= 1");
    if (!all_finite(g)) throw SolverError("cg_solve: right-hand side is not finite");

    CgResult result;
    result.delta = ParamVector(g.shape());

    // r = b - A delta with b = -g; the reported residual A delta + g is -r.
    ParamVector r = -1.0 * g;
    if (norm_inf(r) <= tau) {
        result.final_residual_inf = norm_inf(r);
        result.converged = true;
        return result;
    }

    ParamVector p = r;
    ParamVector ap(g.shape());
    double rr = dot(r, r);
    while (result.iterations < max_iters) {
        apply(p, ap);
        require_same_shape(ap, p, "cg_solve operator output");
        const double pap = dot(p, ap);
        if (!std::isfinite(pap) || !all_finite(ap)) {
            throw SolverError("cg_solve: non-finite operator output at iteration " +
                              std::to_string(result.iterations + 1));
        }
        if (pap <= 0.0) {
            throw SolverError("cg_solve: non-positive curvature <p, Ap> = " + format_double(pap) +
                              " at iteration " + std::to_string(result.iterations + 1));
        }
        const double alpha = rr / pap;
        result.delta.axpy(alpha, p);
        r.axpy(-alpha, ap);
        ++result.iterations;
        if (!all_finite(result.delta)) throw SolverError("cg_solve: iterate overflowed");
        if (norm_inf(r) <= tau) break;
        const double rr_next = dot(r, r);
        const double beta = rr_next / rr;
        rr = rr_next;
        for (std::size_t i = 0; i < p.size(); ++i) p[i] = r[i] + beta * p[i];
    }

    // The recursive residual drifts from the true one; report the latter.
    ParamVector a_delta(g.shape());
    apply(result.delta, a_delta);
    ParamVector residual = a_delta + g;
    result.final_residual_inf = norm_inf(residual);
    if (!std::isfinite(result.final_residual_inf) || !all_finite(residual)) {
        throw SolverError("cg_solve: non-finite final residual");
    }
    result.converged = result.final_residual_inf <= tau;
    result.model_change = dot(g, result.delta) + 0.5 * dot(result.delta, a_delta);
    return result;
}

}  // namespace drslf
