#pragma once

#include <cstddef>
#include <cstdint>

#include "drslf/data.hpp"
#include "drslf/factor_state.hpp"
#include "drslf/param_vector.hpp"

namespace drslf {

struct Hyperparams {
    std::size_t f = 20;
    double lambda_r1 = 0.01;   // smooth-L1 weight
    double lambda_r2 = 1e-4;   // L2 weight
    double epsilon = 1e-8;     // smooth-L1 smoothing
    double gamma = 20.0;       // damping
    double tau = 10.0;         // CG max-norm residual tolerance
    std::size_t cg_max_iters = 10;
    std::size_t max_epochs = 500;
    std::size_t patience = 10;
    double init_lo = 0.0;
    double init_hi = 0.04;
    std::uint64_t seed = 1;

    // Throws InvalidArgument when any field violates its range.
    void validate() const;

    friend bool operator==(const Hyperparams&, const Hyperparams&) = default;
};

Shape shape_for(const TripleSet& t, std::size_t rank);

// Every element i.i.d. U[init_lo, init_hi) from a generator seeded with h.seed.
FactorState init_factors(std::size_t num_users, std::size_t num_services, const Hyperparams& h);

// <x_u, x_s>; throws InvalidArgument on an out-of-range index.
double predict(const FactorState& x, std::size_t u, std::size_t s);

inline double predict_unchecked(const FactorState& x, std::size_t u, std::size_t s) noexcept {
    const auto xu = x.user(u);
    const auto xs = x.service(s);
    double acc = 0.0;
    for (std::size_t d = 0; d < xu.size(); ++d) acc += xu[d] * xs[d];
    return acc;
}

// 1/2 sum over K of (q - <x_u, x_s>)^2
double loss_data(const FactorState& x, const IndexedDataset& d);

// loss_data + lambda_r1 * sum_K sum_d (sqrt(x_ud^2+eps) + sqrt(x_sd^2+eps))
//           + lambda_r2/2 * sum_K sum_d (x_ud^2 + x_sd^2)
// The regularizers are summed per observation, so row u is weighted |K_u|.
double objective(const FactorState& x, const IndexedDataset& d, const Hyperparams& h);

ParamVector gradient(const FactorState& x, const IndexedDataset& d, const Hyperparams& h);

}  // namespace drslf
