#include "drslf/factor_model.hpp"

#include <cmath>
#include <random>
#include <string>

#include "drslf/error.hpp"

namespace drslf {

namespace {

void require_compatible(const FactorState& x, const IndexedDataset& d) {
    if (x.num_users() != d.num_users() || x.num_services() != d.num_services()) {
        throw ShapeError("factor state is " + std::to_string(x.num_users()) + "x" +
                         std::to_string(x.num_services()) + " but dataset is " +
                         std::to_string(d.num_users()) + "x" + std::to_string(d.num_services()));
    }
}

}  // namespace

void Hyperparams::validate() const {
    const auto fail = [](const std::string& what) { throw InvalidArgument("hyperparameter " + what); };
    if (f < 1) fail("f must be >= 1");
    if (!(lambda_r1 >= 0.0) || !std::isfinite(lambda_r1)) fail("lambda_r1 must be >= 0");
    if (!(lambda_r2 >= 0.0) || !std::isfinite(lambda_r2)) fail("lambda_r2 must be >= 0");
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) fail("epsilon must be > 0");
    if (!(gamma >= 0.0) || !std::isfinite(gamma)) fail("gamma must be >= 0");
    if (!(tau > 0.0)) fail("tau must be > 0");
    if (cg_max_iters < 1) fail("cg_max_iters must be >= 1");
    if (!(init_lo < init_hi) || !std::isfinite(init_lo) || !std::isfinite(init_hi)) {
        fail("init range must satisfy init_lo < init_hi");
    }
}

Shape shape_for(const TripleSet& t, std::size_t rank) {
    return Shape{t.num_users(), t.num_services(), rank};
}

FactorState init_factors(std::size_t num_users, std::size_t num_services, const Hyperparams& h) {
    h.validate();
    FactorState x(Shape{num_users, num_services, h.f});
    std::mt19937_64 rng(h.seed);
    std::uniform_real_distribution<double> dist(h.init_lo, h.init_hi);
    for (double& v : x.params().values()) v = dist(rng);
    return x;
}

double predict(const FactorState& x, std::size_t u, std::size_t s) {
    if (u >= x.num_users() || s >= x.num_services()) {
        throw InvalidArgument("predict: index (" + std::to_string(u) + ", " + std::to_string(s) +
                              ") out of range");
    }
    return predict_unchecked(x, u, s);
}

double loss_data(const FactorState& x, const IndexedDataset& d) {
    require_compatible(x, d);
    double acc = 0.0;
    for (const Triple& t : d.triples()) {
        const double r = t.value - predict_unchecked(x, t.user, t.service);
        acc += r * r;
    }
    return 0.5 * acc;
}

double objective(const FactorState& x, const IndexedDataset& d, const Hyperparams& h) {
    const double loss = loss_data(x, d);
    double l1 = 0.0;
    double l2 = 0.0;
    const auto accumulate_row = [&](std::span<const double> row, double count) {
        if (count == 0.0) return;
        double row_l1 = 0.0;
        double row_l2 = 0.0;
        for (double v : row) {
            row_l1 += std::sqrt(v * v + h.epsilon);
            row_l2 += v * v;
        }
        l1 += count * row_l1;
        l2 += count * row_l2;
    };
    for (std::size_t u = 0; u < x.num_users(); ++u) accumulate_row(x.user(u), d.user_count(u));
    for (std::size_t s = 0; s < x.num_services(); ++s) accumulate_row(x.service(s), d.service_count(s));
    return loss + h.lambda_r1 * l1 + 0.5 * h.lambda_r2 * l2;
}

ParamVector gradient(const FactorState& x, const IndexedDataset& d, const Hyperparams& h) {
    require_compatible(x, d);
    ParamVector g(x.shape());
    const std::size_t f = x.rank();
    for (const Triple& t : d.triples()) {
        const auto xu = x.user(t.user);
        const auto xs = x.service(t.service);
        const double r = t.value - predict_unchecked(x, t.user, t.service);
        auto gu = g.user(t.user);
        auto gs = g.service(t.service);
        for (std::size_t k = 0; k < f; ++k) {
            gu[k] -= r * xs[k];
            gs[k] -= r * xu[k];
        }
    }
    const auto add_reg = [&](std::span<const double> row, std::span<double> grow, double count) {
        for (std::size_t k = 0; k < f; ++k) {
            const double v = row[k];
            grow[k] += count * (h.lambda_r1 * v / std::sqrt(v * v + h.epsilon) + h.lambda_r2 * v);
        }
    };
    for (std::size_t u = 0; u < x.num_users(); ++u) add_reg(x.user(u), g.user(u), d.user_count(u));
    for (std::size_t s = 0; s < x.num_services(); ++s) {
        add_reg(x.service(s), g.service(s), d.service_count(s));
    }
    return g;
}

}  // namespace drslf
