#include "drslf/bench.hpp"

#include <algorithm>
#include <iomanip>
#include <ostream>

#include "drslf/error.hpp"
#include "drslf/format.hpp"

namespace drslf {

namespace {

Hyperparams benchmark_fixed() {
    Hyperparams h;
    h.f = 20;
    h.init_lo = 0.0;
    h.init_hi = 0.04;
    h.tau = 10.0;
    h.max_epochs = 500;
    h.patience = 10;
    return h;
}

}  // namespace

std::vector<ModelConfig> benchmark_models() {
    // Untuned starting points; `tuning` or the grid command refine them.
    Hyperparams m1 = benchmark_fixed();
    m1.lambda_r1 = 0.0;
    m1.lambda_r2 = 1e-2;
    Hyperparams m2 = benchmark_fixed();
    m2.lambda_r1 = 0.0;
    m2.lambda_r2 = 1e-4;
    m2.gamma = 100.0;
    Hyperparams m3 = benchmark_fixed();
    m3.lambda_r1 = 0.01;
    m3.lambda_r2 = 1e-4;
    m3.gamma = 100.0;
    return {
        {"M1", OptimizerKind::sgdm(0.001, 0.9), m1, std::nullopt},
        {"M2", OptimizerKind::slf(), m2, std::nullopt},
        {"M3", OptimizerKind::drslf(), m3, std::nullopt},
    };
}

ModelConfig benchmark_model(const std::string& label) {
    for (ModelConfig& m : benchmark_models()) {
        if (m.label == label) return m;
    }
    const Method method = parse_method(label);
    for (ModelConfig& m : benchmark_models()) {
        if (m.kind.method == method) return m;
    }
    throw InvalidArgument("unknown model '" + label + "'");
}

TripleSet load_dataset(const std::filesystem::path& path, DatasetFormat format) {
    std::error_code ec;
    if (!std::filesystem::is_regular_file(path, ec)) {
        throw DataError(
            "dataset file '" + path.string() + "' not found; expected " +
            (format == DatasetFormat::dense
                 ? std::string("a dense QoS matrix (one user per line, whitespace-separated "
                               "values, negative = missing), e.g. the WS-Dream rtMatrix.txt")
                 : std::string("a triple file ('user service value' per line)")));
    }
    return format == DatasetFormat::dense ? load_dense_matrix(path) : load_triples(path);
}

BenchTable run_benchmark(const TripleSet& data, const std::vector<DatasetConfig>& configs,
                         const std::vector<ModelConfig>& models,
                         const std::vector<std::uint64_t>& seeds, std::size_t jobs) {
    if (models.empty()) throw InvalidArgument("no models requested");
    if (configs.empty()) throw InvalidArgument("no dataset configurations requested");
    if (seeds.empty()) throw InvalidArgument("no seeds requested");

    std::vector<ModelConfig> ordered = models;
    std::sort(ordered.begin(), ordered.end(),
              [](const ModelConfig& a, const ModelConfig& b) { return a.label < b.label; });
    if (std::adjacent_find(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
            return a.label == b.label;
        }) != ordered.end()) {
        throw InvalidArgument("duplicate model label in benchmark request");
    }

    BenchTable table;
    for (const DatasetConfig& config : configs) {
        std::vector<SplitDataset> splits;
        splits.reserve(seeds.size());
        for (const std::uint64_t seed : seeds) {
            splits.push_back(split(data, config.train_frac, config.val_frac, seed));
        }
        for (const ModelConfig& model : ordered) {
            BenchRow row;
            row.dataset = config.label;
            row.model = model.label;
            row.h = model.h;
            row.kind = model.kind;
            if (model.tuning) {
                GridSpec grid = *model.tuning;
                grid.fixed = model.h;
                grid.fixed.seed = seeds.front();
                const GridResult tuned = grid_search(splits.front(), grid, model.kind, jobs);
                row.h = tuned.best;
                row.kind = tuned.best_kind;
            }
            double rmse_sum = 0.0;
            double epoch_sum = 0.0;
            for (std::size_t i = 0; i < seeds.size(); ++i) {
                Hyperparams h = row.h;
                h.seed = seeds[i];
                const TrainResult run = train(splits[i], h, row.kind);
                row.per_seed.push_back({seeds[i], run.report.final_test_rmse, run.report.best_epoch,
                                        run.report.epochs.size()});
                rmse_sum += run.report.final_test_rmse;
                epoch_sum += static_cast<double>(run.report.best_epoch);
            }
            row.seeds = seeds.size();
            row.mean_rmse = rmse_sum / static_cast<double>(seeds.size());
            row.mean_best_epoch = epoch_sum / static_cast<double>(seeds.size());
            table.rows.push_back(std::move(row));
        }
    }
    return table;
}

BenchTable run_benchmark(const std::filesystem::path& dataset, DatasetFormat format,
                         const std::vector<DatasetConfig>& configs,
                         const std::vector<ModelConfig>& models,
                         const std::vector<std::uint64_t>& seeds, std::size_t jobs) {
    if (models.empty()) throw InvalidArgument("no models requested");
    return run_benchmark(load_dataset(dataset, format), configs, models, seeds, jobs);
}

void write_bench_csv(const BenchTable& table, std::ostream& out) {
    out << "dataset,model,mean_rmse,mean_best_epoch,seeds\n";
    for (const BenchRow& r : table.rows) {
        out << r.dataset << ',' << r.model << ',' << format_double(r.mean_rmse) << ','
            << format_double(r.mean_best_epoch) << ',' << r.seeds << '\n';
    }
}

void write_bench_per_seed_csv(const BenchTable& table, std::ostream& out) {
    out << "dataset,model,seed,test_rmse,best_epoch,epochs_run\n";
    for (const BenchRow& r : table.rows) {
        for (const SeedOutcome& s : r.per_seed) {
            out << r.dataset << ',' << r.model << ',' << s.seed << ',' << format_double(s.test_rmse)
                << ',' << s.best_epoch << ',' << s.epochs_run << '\n';
        }
    }
}

void write_bench_text(const BenchTable& table, std::ostream& out) {
    const auto old_flags = out.flags();
    const auto old_precision = out.precision();
    out << std::left << std::setw(10) << "Dataset" << std::setw(8) << "Model" << std::right
        << std::setw(12) << "RMSE" << std::setw(10) << "Epoch" << std::setw(8) << "Seeds" << '\n';
    out << std::string(48, '-') << '\n';
    out << std::fixed;
    for (const BenchRow& r : table.rows) {
        out << std::left << std::setw(10) << r.dataset << std::setw(8) << r.model << std::right
            << std::setprecision(5) << std::setw(12) << r.mean_rmse << std::setprecision(1)
            << std::setw(10) << r.mean_best_epoch << std::setw(8) << r.seeds << '\n';
    }
    out.flags(old_flags);
    out.precision(old_precision);
}

}  // namespace drslf
