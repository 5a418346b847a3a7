#include <doctest.h>

#include <cmath>
#include <random>

#include "drslf/curvature.hpp"
#include "drslf/error.hpp"
#include "oracles.hpp"

using namespace drslf;

namespace {

struct OneObservation {
    IndexedDataset data = build_index(TripleSet(1, 1, {{0, 0, 1.0}}));
    FactorState x = FactorState(ParamVector(Shape{1, 1, 1}, {2.0, 3.0}));
};

ParamVector pv(double a, double b) { return ParamVector(Shape{1, 1, 1}, {a, b}); }

}  // namespace

TEST_CASE("jacobian_vector examples") {
    OneObservation p;
    CurvatureContext ctx(p.x, p.data, Hyperparams{});
    CHECK(ctx.jacobian_vector(pv(0, 0)) == std::vector<double>{0.0});
    CHECK(ctx.jacobian_vector(pv(1, 1)) == std::vector<double>{5.0});

    // Against the explicit Jacobian row [3, 2].
    const auto j = testing::dense_jacobian(p.x, p.data);
    CHECK(j(0, 0) == 3.0);
    CHECK(j(0, 1) == 2.0);
}

TEST_CASE("jacobian_vector along x is twice the prediction (Euler identity)") {
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 30; ++trial) {
        const auto inst = testing::random_instance(rng);
        CurvatureContext ctx(inst.x, inst.data, Hyperparams{});
        const auto jv = ctx.jacobian_vector(inst.x.params());
        for (std::size_t k = 0; k < inst.data.size(); ++k) {
            const Triple& t = inst.data.triples()[k];
            CHECK(jv[k] == doctest::Approx(2.0 * predict(inst.x, t.user, t.service)).epsilon(1e-12));
        }
    }
}

TEST_CASE("gn_hvp examples") {
    OneObservation p;
    CurvatureContext ctx(p.x, p.data, Hyperparams{});
    CHECK(ctx.gn_hvp(pv(1, 1)) == pv(15, 10));
    CHECK(ctx.gn_hvp(pv(1, 0)) == pv(9, 6));
    CHECK(ctx.gn_hvp(pv(0, 0)) == pv(0, 0));

    const auto g = testing::dense_gn_oracle(ctx);
    CHECK(g.data == std::vector<double>{9, 6, 6, 4});
}

TEST_CASE("dense oracle at the origin and size guard") {
    const IndexedDataset d = build_index(TripleSet(2, 2, {{0, 0, 1.0}, {1, 1, 2.0}}));
    const FactorState zero(Shape{2, 2, 2});
    const auto g = testing::dense_gn_oracle(zero, d);
    for (double v : g.data) CHECK(v == 0.0);

    const IndexedDataset big = build_index(TripleSet(60, 60, {{0, 0, 1.0}}));
    CHECK_THROWS(testing::dense_gn_oracle(FactorState(Shape{60, 60, 2}), big));
}

TEST_CASE("gn_hvp equals the dense oracle (property)") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 100; ++trial) {
        const auto inst = testing::random_instance(rng);
        CurvatureContext ctx(inst.x, inst.data, Hyperparams{});
        const ParamVector v = testing::random_direction(rng, inst.x.shape());
        const auto expected = testing::matvec(testing::dense_gn_oracle(ctx),
                                              {v.values().begin(), v.values().end()});
        CHECK(testing::max_abs_diff(ctx.gn_hvp(v), expected) <= 1e-10 * (1.0 + norm_inf(v)));
    }
}

TEST_CASE("reg_l1_hvp examples") {
    const IndexedDataset d = build_index(TripleSet(1, 1, {{0, 0, 1.0}}));
    Hyperparams h;
    h.lambda_r1 = 0.1;
    h.epsilon = 1.0;
    {
        const FactorState x(Shape{1, 1, 1});
        CurvatureContext ctx(x, d, h);
        const ParamVector out = ctx.reg_l1_hvp(pv(1, 0));
        CHECK(out[0] == doctest::Approx(0.1).epsilon(1e-15));
        CHECK(out[1] == 0.0);
        CHECK(ctx.reg_l1_hvp(pv(0, 0)) == pv(0, 0));
    }
    {
        std::vector<Triple> triples;
        for (std::size_t s = 0; s < 10; ++s) triples.push_back({0, s, 1.0});
        const IndexedDataset ten = build_index(TripleSet(1, 10, triples));
        FactorState x(Shape{1, 10, 1});
        x.user(0)[0] = 100.0;
        h.epsilon = 1e-8;
        CurvatureContext ctx(x, ten, h);
        ParamVector v(x.shape());
        v[0] = 1.0;
        CHECK(std::abs(ctx.reg_l1_hvp(v)[0]) < 1e-12);
    }
}

TEST_CASE("reg_l2_hvp examples") {
    std::vector<Triple> triples;
    for (std::size_t s = 0; s < 5; ++s) triples.push_back({0, s, 1.0});
    triples.push_back({1, 0, 1.0});
    const IndexedDataset d = build_index(TripleSet(2, 5, triples));
    const FactorState x(Shape{2, 5, 2});
    Hyperparams h;
    h.lambda_r2 = 1e-4;
    CurvatureContext ctx(x, d, h);

    ParamVector v(x.shape());
    v.user(0)[1] = 2.0;
    const ParamVector out = ctx.reg_l2_hvp(v);
    CHECK(out.user(0)[1] == doctest::Approx(1e-3).epsilon(1e-15));

    // Unit basis vector: a single diagonal entry lambda_r2 * |K_s|.
    ParamVector e(x.shape());
    e.service(0)[0] = 1.0;
    const ParamVector col = ctx.reg_l2_hvp(e);
    const std::size_t hit = col.shape().service_offset();
    for (std::size_t i = 0; i < col.size(); ++i) {
        if (i == hit) {
            CHECK(col[i] == doctest::Approx(2e-4).epsilon(1e-15));
        } else {
            CHECK(col[i] == 0.0);
        }
    }

    h.lambda_r2 = 0.0;
    CurvatureContext zero(x, d, h);
    CHECK(norm_inf(zero.reg_l2_hvp(v)) == 0.0);
}

TEST_CASE("damped_hvp examples") {
    {
        const IndexedDataset d = build_index(TripleSet(2, 3, {{0, 0, 1.0}, {1, 2, 2.0}}));
        const FactorState zero(Shape{2, 3, 2});
        Hyperparams h;
        h.lambda_r1 = 0.0;
        h.lambda_r2 = 0.0;
        h.gamma = 7.5;
        CurvatureContext ctx(zero, d, h);
        std::mt19937_64 rng(1);
        const ParamVector v = testing::random_direction(rng, zero.shape());
        CHECK(ctx.damped_hvp(v) == 7.5 * v);
    }
    {
        OneObservation p;
        Hyperparams h;
        h.lambda_r1 = 0.1;
        h.epsilon = 1.0;
        h.lambda_r2 = 1e-4;
        h.gamma = 20.0;
        CurvatureContext ctx(p.x, p.data, h);
        // Component-wise: GN (15, 10); L1 0.1/(5 sqrt 5), 0.1/(10 sqrt 10); L2 1e-4; damping 20.
        const double l1_u = 0.1 * 1.0 / (5.0 * std::sqrt(5.0));
        const double l1_s = 0.1 * 1.0 / (10.0 * std::sqrt(10.0));
        const ParamVector out = ctx.damped_hvp(pv(1, 1));
        CHECK(out[0] == doctest::Approx(15.0 + l1_u + 1e-4 + 20.0).epsilon(1e-14));
        CHECK(out[1] == doctest::Approx(10.0 + l1_s + 1e-4 + 20.0).epsilon(1e-14));
        const ParamVector sum = ctx.gn_hvp(pv(1, 1)) + ctx.reg_l1_hvp(pv(1, 1)) +
                                ctx.reg_l2_hvp(pv(1, 1)) + 20.0 * pv(1, 1);
        CHECK(testing::relative_error_inf(ctx.damped_hvp(pv(1, 1)), sum) <= 1e-15);
    }
}

TEST_CASE("damped_hvp is linear and symmetric (property)") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 50; ++trial) {
        const auto inst = testing::random_instance(rng);
        Hyperparams h;
        h.lambda_r1 = 0.05;
        h.lambda_r2 = 1e-3;
        h.epsilon = 0.1;
        h.gamma = 20.0;
        CurvatureContext ctx(inst.x, inst.data, h);
        const ParamVector v = testing::random_direction(rng, inst.x.shape());
        const ParamVector w = testing::random_direction(rng, inst.x.shape());
        const double alpha = std::uniform_real_distribution<double>(-4, 4)(rng);
        CHECK(testing::relative_error_inf(ctx.damped_hvp(alpha * v), alpha * ctx.damped_hvp(v)) <= 1e-12);
        const double vaw = dot(v, ctx.damped_hvp(w));
        const double avw = dot(ctx.damped_hvp(v), w);
        CHECK(std::abs(vaw - avw) <= 1e-10 * std::max(std::abs(vaw), 1.0));
        CHECK(dot(v, ctx.gn_hvp(v)) >= -1e-12 * dot(v, v));
        CHECK(dot(v, ctx.damped_hvp(v)) >= (h.gamma - 1e-12) * dot(v, v));
    }
}

TEST_CASE("regularizer HVPs are derivatives of the regularizer gradients (property)") {
    std::mt19937_64 rng(17);
    testing::InstanceOptions opts;
    opts.min_abs = 0.1;
    for (int trial = 0; trial < 50; ++trial) {
        const auto inst = testing::random_instance(rng, opts);
        Hyperparams h;
        h.lambda_r1 = 0.05;
        h.lambda_r2 = 1e-4;
        h.epsilon = trial % 2 ? 1.0 : 1e-8;
        CurvatureContext ctx(inst.x, inst.data, h);
        const ParamVector v = testing::random_direction(rng, inst.x.shape());
        const ParamVector fd1 =
            testing::fd_l1_directional(inst.x, inst.data, h.lambda_r1, h.epsilon, v, 1e-4);
        const ParamVector fd2 = testing::fd_directional(
            [&](const FactorState& p) { return testing::ref_l2_gradient(p, inst.data, h.lambda_r2); },
            inst.x, v, 1e-5);
        CHECK(testing::relative_error_inf(ctx.reg_l1_hvp(v), fd1) <= 1e-5);
        CHECK(testing::relative_error_inf(ctx.reg_l2_hvp(v), fd2) <= 1e-5);
    }
}

TEST_CASE("curvature rejects mismatched directions") {
    OneObservation p;
    CurvatureContext ctx(p.x, p.data, Hyperparams{});
    const ParamVector wrong(Shape{2, 1, 1});
    CHECK_THROWS_AS(ctx.gn_hvp(wrong), ShapeError);
    CHECK_THROWS_AS(ctx.damped_hvp(wrong), ShapeError);
    CHECK_THROWS_AS(ctx.jacobian_vector(wrong), ShapeError);
    const FactorState other(Shape{2, 2, 1});
    CHECK_THROWS_AS(CurvatureContext(other, p.data, Hyperparams{}), ShapeError);
}
