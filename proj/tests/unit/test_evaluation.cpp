#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "drslf/bench.hpp"
#include "drslf/error.hpp"
#include "drslf/evaluation.hpp"
#include "drslf/grid_search.hpp"
#include "oracles.hpp"

using namespace drslf;

namespace {

Hyperparams quick() {
    Hyperparams h;
    h.f = 2;
    h.gamma = 1.0;
    h.tau = 1e-4;
    h.max_epochs = 8;
    h.patience = 3;
    h.init_hi = 0.5;
    return h;
}

}  // namespace

TEST_CASE("rmse hand values") {
    const FactorState x(ParamVector(Shape{2, 1, 1}, {1.0, 2.0, 1.0}));
    CHECK(rmse(x, build_index(TripleSet(2, 1, {{0, 0, 1.0}, {1, 0, 2.0}}))) == 0.0);
    CHECK(rmse(x, build_index(TripleSet(2, 1, {{0, 0, 2.0}}))) == 1.0);
    CHECK(rmse(x, build_index(TripleSet(2, 1, {{0, 0, 2.0}, {1, 0, 5.0}}))) ==
          doctest::Approx(std::sqrt(5.0)).epsilon(1e-15));
    CHECK(std::sqrt(5.0) == doctest::Approx(2.2360679775).epsilon(1e-10));
    CHECK_THROWS_AS(rmse(x, build_index(TripleSet(2, 1, {}))), InvalidArgument);
}

TEST_CASE("rmse^2 |Omega| = 2 loss_data (property)") {
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 100; ++trial) {
        const auto inst = testing::random_instance(rng);
        const double r = rmse(inst.x, inst.data);
        const double lhs = r * r * static_cast<double>(inst.data.size());
        const double rhs = 2.0 * loss_data(inst.x, inst.data);
        CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(rhs, 1e-300));
    }
}

TEST_CASE("standard grid has 825 DRSLF points") {
    const GridSpec grid = GridSpec::standard();
    CHECK(grid.lambda_r1_values.size() == 11);
    CHECK(grid.lambda_r2_values.size() == 5);
    CHECK(grid.gamma_values.size() == 15);
    CHECK(enumerate_grid(grid, OptimizerKind::drslf()).size() == 825);
    CHECK(grid.lambda_r1_values.back() == 0.1);
    CHECK(grid.gamma_values.front() == 20.0);
    CHECK(grid.gamma_values.back() == 300.0);
    // SLF has no L1 axis.
    CHECK(enumerate_grid(grid, OptimizerKind::slf()).size() == 75);
}

TEST_CASE("grid enumeration is lexicographic and collapses unused axes") {
    GridSpec grid;
    grid.lambda_r1_values = {0.05, 0.0};
    grid.lambda_r2_values = {1e-3, 1e-4};
    grid.gamma_values = {40.0, 20.0};
    grid.learning_rate_values = {0.01, 0.001};
    grid.momentum_values = {0.9};
    const auto pts = enumerate_grid(grid, OptimizerKind::drslf());
    REQUIRE(pts.size() == 8);
    for (std::size_t i = 1; i < pts.size(); ++i) {
        const auto key = [](const GridPoint& p) {
            return std::make_tuple(p.h.lambda_r1, p.h.lambda_r2, p.h.gamma);
        };
        CHECK(key(pts[i - 1]) < key(pts[i]));
    }
    const auto sgd = enumerate_grid(grid, OptimizerKind::sgdm(0.1, 0.5));
    CHECK(sgd.size() == 4);  // lambda_r2 x learning_rate
    for (const auto& p : sgd) CHECK(p.h.lambda_r1 == 0.0);
}

TEST_CASE("grid search picks the lowest validation RMSE") {
    const auto synth = synth_lowrank(20, 30, 2, 0.6, 0.05, 2);
    const SplitDataset s = split(synth.data, 0.5, 0.25, 2);

    GridSpec single;
    single.lambda_r1_values = {0.01};
    single.lambda_r2_values = {1e-4};
    single.gamma_values = {1.0};
    single.fixed = quick();
    const GridResult one = grid_search(s, single, OptimizerKind::drslf());
    REQUIRE(one.points.size() == 1);
    CHECK(one.best_index == 0);
    CHECK(one.best == one.points[0].h);

    GridSpec two = single;
    two.gamma_values = {1.0, 1e4};
    const GridResult r = grid_search(s, two, OptimizerKind::drslf());
    REQUIRE(r.points.size() == 2);
    const std::size_t expected = r.points[0].best_val_rmse <= r.points[1].best_val_rmse ? 0 : 1;
    CHECK(r.best_index == expected);
    for (const auto& p : r.points) CHECK(r.points[r.best_index].best_val_rmse <= p.best_val_rmse);

    // Same answer with parallel workers.
    const GridResult par = grid_search(s, two, OptimizerKind::drslf(), 2);
    CHECK(par.best_index == r.best_index);
    CHECK(par.points[0].best_val_rmse == r.points[0].best_val_rmse);
    CHECK(par.points[1].best_val_rmse == r.points[1].best_val_rmse);

    std::ostringstream csv;
    write_grid_csv(r, csv);
    CHECK(csv.str().starts_with(
        "lambda_r1,lambda_r2,gamma,learning_rate,momentum,status,best_val_rmse,best_epoch,test_rmse\n"));
}

TEST_CASE("grid search records failures and errors when all fail") {
    const auto synth = synth_lowrank(20, 30, 2, 0.6, 0.05, 2);
    const SplitDataset s = split(synth.data, 0.5, 0.25, 2);
    GridSpec grid;
    grid.lambda_r1_values = {0.0};
    grid.lambda_r2_values = {1e-4};
    grid.gamma_values = {1.0};
    grid.learning_rate_values = {0.01, 1e6};
    grid.fixed = quick();
    grid.fixed.init_hi = 5.0;
    const GridResult r = grid_search(s, grid, OptimizerKind::sgdm(0.01, 0.5));
    REQUIRE(r.points.size() == 2);
    CHECK(r.points[0].ok);
    CHECK_FALSE(r.points[1].ok);
    CHECK_FALSE(r.points[1].error.empty());
    CHECK(r.best_index == 0);

    grid.learning_rate_values = {1e6};
    CHECK_THROWS_AS(grid_search(s, grid, OptimizerKind::sgdm(0.01, 0.5)), Error);

    GridSpec empty;
    CHECK_THROWS_AS(grid_search(s, empty, OptimizerKind::drslf()), InvalidArgument);
}

TEST_CASE("benchmark rows") {
    const auto synth = synth_lowrank(20, 30, 2, 0.6, 0.05, 4);
    std::vector<ModelConfig> models = {
        {"M1", OptimizerKind::sgdm(0.02, 0.5), quick(), std::nullopt},
        {"M2", OptimizerKind::slf(), quick(), std::nullopt},
        {"M3", OptimizerKind::drslf(), quick(), std::nullopt},
    };
    const std::vector<DatasetConfig> configs = {DatasetConfig::d1(), DatasetConfig::d2()};

    const BenchTable t = run_benchmark(synth.data, configs, models, {1});
    REQUIRE(t.rows.size() == 6);
    for (const BenchRow& r : t.rows) {
        CHECK(r.seeds == 1);
        CHECK(r.per_seed.size() == 1);
        CHECK(r.mean_rmse == r.per_seed[0].test_rmse);
    }
    CHECK(t.rows[0].dataset == "D1");
    CHECK(t.rows[3].dataset == "D2");

    // Order of the request does not matter.
    std::vector<ModelConfig> reversed(models.rbegin(), models.rend());
    const BenchTable u = run_benchmark(synth.data, configs, reversed, {1});
    std::ostringstream a, b;
    write_bench_csv(t, a);
    write_bench_csv(u, b);
    CHECK(a.str() == b.str());
    CHECK(a.str().starts_with("dataset,model,mean_rmse,mean_best_epoch,seeds\n"));

    const BenchTable multi = run_benchmark(synth.data, {DatasetConfig::d2()}, {models[2]}, {1, 2, 3});
    REQUIRE(multi.rows.size() == 1);
    const auto& row = multi.rows[0];
    CHECK(row.seeds == 3);
    double mean = 0.0;
    for (const auto& s : row.per_seed) mean += s.test_rmse;
    CHECK(row.mean_rmse == doctest::Approx(mean / 3.0).epsilon(1e-15));

    CHECK_THROWS_WITH_AS(run_benchmark(synth.data, configs, {}, {1}), "no models requested", InvalidArgument);
    CHECK_THROWS_AS(run_benchmark(synth.data, configs, models, {}), InvalidArgument);
}

TEST_CASE("benchmark tuning uses the grid winner") {
    const auto synth = synth_lowrank(20, 30, 2, 0.6, 0.05, 4);
    GridSpec grid;
    grid.lambda_r1_values = {0.0, 0.01};
    grid.lambda_r2_values = {1e-4};
    grid.gamma_values = {1.0};
    ModelConfig m3{"M3", OptimizerKind::drslf(), quick(), grid};
    const BenchTable t = run_benchmark(synth.data, {DatasetConfig::d2()}, {m3}, {1});
    const SplitDataset s = split(synth.data, 0.2, 0.4, 1);
    grid.fixed = quick();
    grid.fixed.seed = 1;
    const GridResult g = grid_search(s, grid, OptimizerKind::drslf());
    CHECK(t.rows[0].h.lambda_r1 == g.best.lambda_r1);
}

TEST_CASE("missing dataset names the expected format") {
    CHECK_THROWS_WITH_AS(load_dataset("/no/such/rtMatrix.txt", DatasetFormat::dense),
                         doctest::Contains("dense QoS matrix"), DataError);
    CHECK_THROWS_AS(run_benchmark("/no/such/file", DatasetFormat::triples, {DatasetConfig::d1()},
                                  benchmark_models(), {1}),
                    DataError);
    CHECK(benchmark_models().size() == 3);
    CHECK(benchmark_model("M2").kind.method == Method::slf);
    CHECK(benchmark_model("drslf").label == "M3");
}
