#include "drslf/grid_search.hpp"

#include <algorithm>
#include <atomic>
#include <ostream>
#include <thread>

#include "drslf/error.hpp"
#include "drslf/format.hpp"

namespace drslf {

namespace {

std::vector<double> sorted_unique(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    return values;
}

void run_point(const SplitDataset& split, GridPoint& point) {
    try {
        const TrainResult run = train(split, point.h, point.kind);
        point.best_val_rmse = run.report.best_val_rmse;
        point.best_epoch = run.report.best_epoch;
        point.test_rmse = run.report.final_test_rmse;
        point.ok = true;
    } catch (const std::exception& e) {
        point.ok = false;
        point.error = e.what();
    }
}

}  // namespace

GridSpec GridSpec::standard(const Hyperparams& fixed) {
    GridSpec grid;
    for (int i = 0; i <= 10; ++i) grid.lambda_r1_values.push_back(i / 100.0);
    grid.lambda_r2_values = {1e-7, 1e-6, 1e-5, 1e-4, 1e-3};
    for (int i = 1; i <= 15; ++i) grid.gamma_values.push_back(20.0 * i);
    grid.fixed = fixed;
    return grid;
}

void GridSpec::validate() const {
    if (lambda_r1_values.empty() || lambda_r2_values.empty() || gamma_values.empty()) {
        throw InvalidArgument("grid: lambda_r1, lambda_r2 and gamma lists must be non-empty");
    }
    fixed.validate();
    for (const GridPoint& p : enumerate_grid(*this, OptimizerKind::drslf())) p.h.validate();
}

std::vector<GridPoint> enumerate_grid(const GridSpec& grid, const OptimizerKind& kind) {
    const bool second_order = kind.method != Method::sgdm;
    const auto r1 = kind.method == Method::drslf ? sorted_unique(grid.lambda_r1_values)
                                                 : std::vector<double>{0.0};
    const auto r2 = sorted_unique(grid.lambda_r2_values);
    const auto gammas = second_order ? sorted_unique(grid.gamma_values)
                                     : std::vector<double>{grid.fixed.gamma};
    const auto rates = second_order || grid.learning_rate_values.empty()
                           ? std::vector<double>{kind.learning_rate}
                           : sorted_unique(grid.learning_rate_values);
    const auto moms = second_order || grid.momentum_values.empty()
                          ? std::vector<double>{kind.momentum}
                          : sorted_unique(grid.momentum_values);

    std::vector<GridPoint> points;
    for (double a : r1) {
        for (double b : r2) {
            for (double c : gammas) {
                for (double lr : rates) {
                    for (double m : moms) {
                        GridPoint p;
                        p.h = grid.fixed;
                        p.h.lambda_r1 = a;
                        p.h.lambda_r2 = b;
                        p.h.gamma = c;
                        p.kind = kind;
                        p.kind.learning_rate = lr;
                        p.kind.momentum = m;
                        points.push_back(std::move(p));
                    }
                }
            }
        }
    }
    return points;
}

GridResult grid_search(const SplitDataset& split, const GridSpec& grid, const OptimizerKind& kind,
                       std::size_t jobs) {
    grid.validate();
    GridResult result;
    result.points = enumerate_grid(grid, kind);

    const std::size_t workers = std::clamp<std::size_t>(jobs, 1, result.points.size());
    if (workers == 1) {
        for (GridPoint& p : result.points) run_point(split, p);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < result.points.size(); i = next++) {
                    run_point(split, result.points[i]);
                }
            });
        }
    }

    bool found = false;
    for (std::size_t i = 0; i < result.points.size(); ++i) {
        const GridPoint& p = result.points[i];
        if (!p.ok) continue;
        if (!found || p.best_val_rmse < result.points[result.best_index].best_val_rmse) {
            result.best_index = i;
            found = true;
        }
    }
    if (!found) {
        throw Error("grid", "all " + std::to_string(result.points.size()) +
                                " grid points failed; first error: " + result.points.front().error);
    }
    result.best = result.points[result.best_index].h;
    result.best_kind = result.points[result.best_index].kind;
    return result;
}

void write_grid_csv(const GridResult& result, std::ostream& out) {
    out << "lambda_r1,lambda_r2,gamma,learning_rate,momentum,status,best_val_rmse,best_epoch,test_rmse\n";
    for (const GridPoint& p : result.points) {
        out << format_double(p.h.lambda_r1) << ',' << format_double(p.h.lambda_r2) << ','
            << format_double(p.h.gamma) << ',' << format_double(p.kind.learning_rate) << ','
            << format_double(p.kind.momentum) << ',' << (p.ok ? "ok" : "failed") << ',';
        if (p.ok) {
            out << format_double(p.best_val_rmse) << ',' << p.best_epoch << ','
                << format_double(p.test_rmse);
        } else {
            out << ",,";
        }
        out << '\n';
    }
}

}  // namespace drslf
