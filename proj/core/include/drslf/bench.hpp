#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "drslf/data.hpp"
#include "drslf/factor_model.hpp"
#include "drslf/grid_search.hpp"
#include "drslf/trainer.hpp"

namespace drslf {

// A train/validation split protocol; test takes the remainder.
struct DatasetConfig {
    std::string label;
    double train_frac = 0.0;
    double val_frac = 0.0;

    static DatasetConfig d1() { return {"D1", 0.10, 0.45}; }
    static DatasetConfig d2() { return {"D2", 0.20, 0.40}; }
};

struct ModelConfig {
    std::string label;
    OptimizerKind kind;
    Hyperparams h;
    // When set, hyperparameters are chosen by grid search on the first
    // seed's split before the seed loop.
    std::optional<GridSpec> tuning;
};

// M1 (SGDM), M2 (SLF) and M3 (DRSLF) with f = 20, U(0, 0.04) init,
// tau = 10, 500 epoch cap and patience 10.
std::vector<ModelConfig> benchmark_models();
ModelConfig benchmark_model(const std::string& label);

struct SeedOutcome {
    std::uint64_t seed = 0;
    double test_rmse = 0.0;
    std::size_t best_epoch = 0;
    std::size_t epochs_run = 0;
};

struct BenchRow {
    std::string dataset;
    std::string model;
    double mean_rmse = 0.0;
    double mean_best_epoch = 0.0;
    std::size_t seeds = 0;
    std::vector<SeedOutcome> per_seed;
    Hyperparams h;        // after tuning, seed field as given
    OptimizerKind kind;
};

struct BenchTable {
    std::vector<BenchRow> rows;
};

enum class DatasetFormat { dense, triples };

// Throws DataError naming the expected format when the file is missing.
TripleSet load_dataset(const std::filesystem::path& path, DatasetFormat format);

// Rows follow the order of `configs`, then model label order, so the table
// does not depend on the order of `models`. Each seed drives both the split
// and the factor initialization.
BenchTable run_benchmark(const TripleSet& data, const std::vector<DatasetConfig>& configs,
                         const std::vector<ModelConfig>& models,
                         const std::vector<std::uint64_t>& seeds, std::size_t jobs = 1);

BenchTable run_benchmark(const std::filesystem::path& dataset, DatasetFormat format,
                         const std::vector<DatasetConfig>& configs,
                         const std::vector<ModelConfig>& models,
                         const std::vector<std::uint64_t>& seeds, std::size_t jobs = 1);

// Header: dataset,model,mean_rmse,mean_best_epoch,seeds
void write_bench_csv(const BenchTable& table, std::ostream& out);
// Header: dataset,model,seed,test_rmse,best_epoch,epochs_run
void write_bench_per_seed_csv(const BenchTable& table, std::ostream& out);
void write_bench_text(const BenchTable& table, std::ostream& out);

}  // namespace drslf
