#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "drslf/data.hpp"
#include "drslf/factor_model.hpp"
#include "drslf/trainer.hpp"

namespace drslf {

struct GridSpec {
    std::vector<double> lambda_r1_values;
    std::vector<double> lambda_r2_values;
    std::vector<double> gamma_values;
    // SGDM only; an empty list means "use the value in the OptimizerKind".
    std::vector<double> learning_rate_values;
    std::vector<double> momentum_values;
    Hyperparams fixed;

    // lambda_r1 in {0, 0.01, ..., 0.1}, lambda_r2 in {1e-7, ..., 1e-3},
    // gamma in {20, 40, ..., 300}.
    static GridSpec standard(const Hyperparams& fixed = {});

    void validate() const;
};

struct GridPoint {
    Hyperparams h;
    OptimizerKind kind;
    bool ok = false;
    std::string error;
    double best_val_rmse = 0.0;
    std::size_t best_epoch = 0;
    double test_rmse = 0.0;
};

struct GridResult {
    Hyperparams best;
    OptimizerKind best_kind;
    std::size_t best_index = 0;
    std::vector<GridPoint> points;
};

// Points in lexicographic (lambda_r1, lambda_r2, gamma, learning_rate,
// momentum) order over the sorted, de-duplicated value lists. Axes that a
// method ignores collapse to one value: SLF and SGDM use lambda_r1 = 0,
// SGDM uses the fixed gamma, second-order methods ignore the SGD axes.
std::vector<GridPoint> enumerate_grid(const GridSpec& grid, const OptimizerKind& kind);

// One training run per point, up to `jobs` at a time. A failed point is
// recorded and excluded; the best point has the lowest validation RMSE at
// its best epoch, ties going to the earliest point in enumeration order.
GridResult grid_search(const SplitDataset& split, const GridSpec& grid, const OptimizerKind& kind,
                       std::size_t jobs = 1);

// Header: lambda_r1,lambda_r2,gamma,learning_rate,momentum,status,best_val_rmse,best_epoch,test_rmse
void write_grid_csv(const GridResult& result, std::ostream& out);

}  // namespace drslf
