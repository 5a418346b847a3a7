// drslf command-line harness: ingest, synth, split, train, grid, bench.
//
// Failures print a single line "error<TAB>category<TAB>message" on stderr and
// exit nonzero.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "drslf/drslf.hpp"

namespace fs = std::filesystem;
using namespace drslf;

namespace {

constexpr int kExitError = 1;
constexpr int kExitUsage = 2;

std::string one_line(std::string s) {
    for (char& c : s) {
        if (c == '\n' || c == '\r' || c == '\t') c = ' ';
    }
    return s;
}

int report_error(const std::string& category, const std::string& message, int code) {
    std::cerr << "error\t" << category << '\t' << one_line(message) << std::endl;
    return code;
}

void make_parent(const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
}

std::ofstream open_output(const fs::path& path) {
    make_parent(path);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("io", "cannot write " + path.string());
    return out;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out = open_output(path);
    out << content;
    if (!out) throw Error("io", "write failed for " + path.string());
}

fs::path default_dataset() {
    if (const char* dir = std::getenv("DRSLF_DATA_DIR")) return fs::path(dir) / "rtMatrix.txt";
    return {};
}

DatasetFormat parse_format(const std::string& name) {
    if (name == "dense") return DatasetFormat::dense;
    if (name == "triples") return DatasetFormat::triples;
    throw InvalidArgument("unknown dataset format '" + name + "' (expected dense or triples)");
}

// Hyperparameter flags. Values are registered on a copy of the defaults and
// the option pointers are kept so that "explicitly given" can be queried.
struct HyperFlags {
    Hyperparams h;
    std::vector<std::pair<CLI::Option*, std::function<void(Hyperparams&)>>> options;

    template <typename T>
    void add(CLI::App& app, const std::string& names, T Hyperparams::*field, const std::string& help) {
        CLI::Option* opt = app.add_option(names, h.*field, help)->capture_default_str();
        options.emplace_back(opt, [this, field](Hyperparams& target) { target.*field = h.*field; });
    }

    void attach(CLI::App& app) {
        add(app, "--f,--rank", &Hyperparams::f, "latent dimension");
        add(app, "--lambda-r1,--lambda_r1", &Hyperparams::lambda_r1, "smooth-L1 weight");
        add(app, "--lambda-r2,--lambda_r2", &Hyperparams::lambda_r2, "L2 weight");
        add(app, "--epsilon", &Hyperparams::epsilon, "smooth-L1 smoothing");
        add(app, "--gamma", &Hyperparams::gamma, "damping");
        add(app, "--tau", &Hyperparams::tau, "CG max-norm residual tolerance");
        add(app, "--cg-max-iters,--cg_max_iters", &Hyperparams::cg_max_iters, "CG iteration cap");
        add(app, "--max-epochs,--max_epochs", &Hyperparams::max_epochs, "epoch cap");
        add(app, "--patience", &Hyperparams::patience, "early-stopping patience (0 disables)");
        add(app, "--init-lo,--init_lo", &Hyperparams::init_lo, "lower bound of the factor init range");
        add(app, "--init-hi,--init_hi", &Hyperparams::init_hi, "upper bound of the factor init range");
    }

    // Copies only the flags given on the command line into `target`.
    void apply_explicit(Hyperparams& target) const {
        for (const auto& [opt, copy] : options) {
            if (opt->count() > 0) copy(target);
        }
    }
};

struct DataFlags {
    fs::path in;
    std::string format = "triples";
    fs::path split_dir;
    double train_frac = DatasetConfig::d1().train_frac;
    double val_frac = DatasetConfig::d1().val_frac;

    void attach(CLI::App& app) {
        auto* in_opt = app.add_option("--in", in, "full dataset; split with --train-frac/--val-frac");
        app.add_option("--format", format, "format of --in: dense or triples")->capture_default_str();
        auto* dir_opt =
            app.add_option("--split-dir,--split_dir", split_dir, "directory with train.txt, validation.txt, test.txt");
        in_opt->excludes(dir_opt);
        app.add_option("--train-frac,--train_frac", train_frac)->capture_default_str();
        app.add_option("--val-frac,--val_frac", val_frac)->capture_default_str();
    }

    SplitDataset load(std::uint64_t seed) const {
        if (!split_dir.empty()) {
            SplitDataset s;
            s.train = build_index(load_triples(split_dir / "train.txt"), Role::train);
            s.validation = build_index(load_triples(split_dir / "validation.txt"), Role::validation);
            s.test = build_index(load_triples(split_dir / "test.txt"), Role::test);
            s.seed = seed;
            for (const IndexedDataset* part : {&s.validation, &s.test}) {
                if (part->num_users() != s.train.num_users() || part->num_services() != s.train.num_services()) {
                    throw ShapeError("split files disagree on dimensions; write them with a '# shape' header");
                }
            }
            return s;
        }
        if (in.empty()) throw InvalidArgument("one of --in or --split-dir is required");
        return split(load_dataset(in, parse_format(format)), train_frac, val_frac, seed);
    }
};

struct OptimizerFlags {
    std::string method = "drslf";
    double learning_rate = 0.01;
    double momentum = 0.9;

    void attach(CLI::App& app) {
        app.add_option("--method", method, "drslf, slf or sgdm (M3, M2, M1)")->capture_default_str();
        app.add_option("--learning-rate,--learning_rate", learning_rate, "SGDM step size")->capture_default_str();
        app.add_option("--momentum", momentum, "SGDM momentum")->capture_default_str();
    }

    OptimizerKind kind() const {
        OptimizerKind k{parse_method(method), learning_rate, momentum};
        k.validate();
        return k;
    }
};

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"DRSLF matrix completion for QoS data"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "drslf 0.1.0");

    // ingest
    auto* ingest = app.add_subcommand("ingest", "convert a dense QoS matrix to triples");
    fs::path ingest_in;
    fs::path ingest_out;
    std::uint64_t ingest_seed = 0;
    ingest->add_option("--in", ingest_in, "dense matrix text")->required();
    ingest->add_option("--out", ingest_out, "triple file to write")->required();
    ingest->add_option("--seed", ingest_seed, "unused; accepted for a uniform interface");

    // synth
    auto* synth = app.add_subcommand("synth", "generate a low-rank matrix with noise");
    std::size_t synth_users = 100;
    std::size_t synth_services = 200;
    std::size_t synth_rank = 3;
    double synth_density = 0.2;
    double synth_noise = 0.01;
    std::uint64_t synth_seed = 1;
    SynthOptions synth_opts;
    fs::path synth_out;
    fs::path synth_truth;
    synth->add_option("--users", synth_users)->capture_default_str();
    synth->add_option("--services", synth_services)->capture_default_str();
    synth->add_option("--rank", synth_rank)->capture_default_str();
    synth->add_option("--density", synth_density)->capture_default_str();
    synth->add_option("--noise", synth_noise, "noise standard deviation")->capture_default_str();
    synth->add_option("--factor-lo,--factor_lo", synth_opts.factor_lo)->capture_default_str();
    synth->add_option("--factor-hi,--factor_hi", synth_opts.factor_hi)->capture_default_str();
    synth->add_option("--seed", synth_seed)->capture_default_str();
    synth->add_option("--out", synth_out, "triple file to write")->required();
    synth->add_option("--truth", synth_truth, "also write the ground-truth factors");

    // split
    auto* split_cmd = app.add_subcommand("split", "partition a dataset into train/validation/test");
    DataFlags split_data;
    std::uint64_t split_seed = 1;
    fs::path split_out;
    split_cmd->add_option("--in", split_data.in)->required();
    split_cmd->add_option("--format", split_data.format, "dense or triples")->capture_default_str();
    split_cmd->add_option("--train-frac,--train_frac", split_data.train_frac)->capture_default_str();
    split_cmd->add_option("--val-frac,--val_frac", split_data.val_frac)->capture_default_str();
    split_cmd->add_option("--seed", split_seed)->capture_default_str();
    split_cmd->add_option("--out", split_out, "output directory")->required();

    // train
    auto* train_cmd = app.add_subcommand("train", "train one model with early stopping");
    DataFlags train_data;
    HyperFlags train_h;
    OptimizerFlags train_opt;
    fs::path train_out;
    bool train_wall = false;
    train_data.attach(*train_cmd);
    train_h.attach(*train_cmd);
    train_opt.attach(*train_cmd);
    train_cmd->add_option("--seed", train_h.h.seed, "split and init seed")->capture_default_str();
    train_cmd->add_option("--out", train_out, "output directory (report.csv, factors.txt)")->required();
    train_cmd->add_flag("--wall-time,--wall_time", train_wall, "record per-epoch wall time in the report");

    // grid
    auto* grid_cmd = app.add_subcommand("grid", "hyperparameter grid search on the validation set");
    DataFlags grid_data;
    HyperFlags grid_h;
    OptimizerFlags grid_opt;
    GridSpec grid_spec = GridSpec::standard();
    fs::path grid_out;
    std::size_t grid_jobs = 1;
    grid_data.attach(*grid_cmd);
    grid_h.attach(*grid_cmd);
    grid_opt.attach(*grid_cmd);
    grid_cmd->add_option("--lambda-r1-values,--lambda_r1_values", grid_spec.lambda_r1_values)->delimiter(',');
    grid_cmd->add_option("--lambda-r2-values,--lambda_r2_values", grid_spec.lambda_r2_values)->delimiter(',');
    grid_cmd->add_option("--gamma-values,--gamma_values", grid_spec.gamma_values)->delimiter(',');
    grid_cmd->add_option("--learning-rate-values,--learning_rate_values", grid_spec.learning_rate_values)
        ->delimiter(',');
    grid_cmd->add_option("--momentum-values,--momentum_values", grid_spec.momentum_values)->delimiter(',');
    grid_cmd->add_option("--seed", grid_h.h.seed, "split and init seed")->capture_default_str();
    grid_cmd->add_option("--jobs", grid_jobs, "concurrent training runs")->capture_default_str();
    grid_cmd->add_option("--out", grid_out, "output directory (grid.csv)")->required();

    // bench
    auto* bench_cmd = app.add_subcommand("bench", "multi-seed benchmark of M1/M2/M3 on D1/D2");
    fs::path bench_in = default_dataset();
    std::string bench_format = "dense";
    std::string bench_datasets = "D1,D2";
    std::string bench_models = "M1,M2,M3";
    std::uint64_t bench_seed = 1;
    std::size_t bench_num_seeds = 5;
    std::size_t bench_jobs = 1;
    bool bench_tune = false;
    HyperFlags bench_h;
    fs::path bench_out;
    bench_cmd->add_option("--in", bench_in, "dataset (default $DRSLF_DATA_DIR/rtMatrix.txt)");
    bench_cmd->add_option("--format", bench_format, "dense or triples")->capture_default_str();
    bench_cmd->add_option("--datasets", bench_datasets, "comma list of D1, D2")->capture_default_str();
    bench_cmd->add_option("--models", bench_models, "comma list of M1, M2, M3")->capture_default_str();
    bench_cmd->add_option("--seed", bench_seed, "first seed")->capture_default_str();
    bench_cmd->add_option("--num-seeds,--num_seeds", bench_num_seeds)->capture_default_str();
    bench_cmd->add_option("--jobs", bench_jobs, "concurrent grid-search runs")->capture_default_str();
    bench_cmd->add_flag("--tune", bench_tune, "grid-search each model on the first seed's split");
    bench_h.attach(*bench_cmd);
    bench_cmd->add_option("--out", bench_out, "output directory (bench.csv, bench_seeds.csv, bench.txt)")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return report_error("usage", e.what(), kExitUsage);
    }

    try {
        if (*ingest) {
            const TripleSet t = load_dense_matrix(ingest_in);
            make_parent(ingest_out);
            save_triples(t, ingest_out);
            std::cout << "users=" << t.num_users() << " services=" << t.num_services() << " observations=" << t.size()
                      << '\n';
        } else if (*synth) {
            const SynthResult r =
                synth_lowrank(synth_users, synth_services, synth_rank, synth_density, synth_noise, synth_seed, synth_opts);
            make_parent(synth_out);
            save_triples(r.data, synth_out);
            if (!synth_truth.empty()) {
                make_parent(synth_truth);
                save_factors(r.truth, synth_truth);
            }
            std::cout << "users=" << r.data.num_users() << " services=" << r.data.num_services()
                      << " observations=" << r.data.size() << '\n';
        } else if (*split_cmd) {
            const SplitDataset s = split_data.load(split_seed);
            fs::create_directories(split_out);
            save_triples(s.train.base(), split_out / "train.txt");
            save_triples(s.validation.base(), split_out / "validation.txt");
            save_triples(s.test.base(), split_out / "test.txt");
            std::cout << "train=" << s.train.size() << " validation=" << s.validation.size()
                      << " test=" << s.test.size() << '\n';
        } else if (*train_cmd) {
            const OptimizerKind kind = train_opt.kind();
            const SplitDataset s = train_data.load(train_h.h.seed);
            TrainOptions options;
            options.record_wall_time = train_wall;
            const TrainResult r = train(s, train_h.h, kind, options);
            std::ostringstream csv;
            write_report_csv(r.report, csv);
            write_file(train_out / "report.csv", csv.str());
            save_factors(r.factors, train_out / "factors.txt");
            std::cout << summary_line(r.report, kind) << '\n';
        } else if (*grid_cmd) {
            const OptimizerKind kind = grid_opt.kind();
            const SplitDataset s = grid_data.load(grid_h.h.seed);
            grid_spec.fixed = grid_h.h;
            const GridResult r = grid_search(s, grid_spec, kind, grid_jobs);
            std::ostringstream csv;
            write_grid_csv(r, csv);
            write_file(grid_out / "grid.csv", csv.str());
            const GridPoint& best = r.points[r.best_index];
            std::cout << "points=" << r.points.size() << " best_lambda_r1=" << format_double(r.best.lambda_r1)
                      << " best_lambda_r2=" << format_double(r.best.lambda_r2)
                      << " best_gamma=" << format_double(r.best.gamma)
                      << " best_learning_rate=" << format_double(r.best_kind.learning_rate)
                      << " best_momentum=" << format_double(r.best_kind.momentum)
                      << " best_val_rmse=" << format_double(best.best_val_rmse) << '\n';
        } else if (*bench_cmd) {
            if (bench_in.empty()) {
                throw InvalidArgument("no dataset: pass --in or set DRSLF_DATA_DIR to a directory with rtMatrix.txt");
            }
            if (bench_num_seeds == 0) throw InvalidArgument("--num-seeds must be positive");
            std::vector<DatasetConfig> configs;
            for (const std::string& label : split_list(bench_datasets)) {
                if (label == "D1") configs.push_back(DatasetConfig::d1());
                else if (label == "D2") configs.push_back(DatasetConfig::d2());
                else throw InvalidArgument("unknown dataset label '" + label + "' (expected D1 or D2)");
            }
            std::vector<ModelConfig> models;
            for (const std::string& label : split_list(bench_models)) {
                ModelConfig m = benchmark_model(label);
                bench_h.apply_explicit(m.h);
                if (bench_tune) {
                    GridSpec g = GridSpec::standard(m.h);
                    if (m.kind.method == Method::sgdm) {
                        g.learning_rate_values = {0.0005, 0.001, 0.002};
                        g.momentum_values = {0.5, 0.9};
                        g.lambda_r2_values = {1e-4, 1e-3, 1e-2};
                    }
                    m.tuning = g;
                }
                models.push_back(std::move(m));
            }
            std::vector<std::uint64_t> seeds;
            for (std::size_t i = 0; i < bench_num_seeds; ++i) seeds.push_back(bench_seed + i);
            const BenchTable t = run_benchmark(bench_in, parse_format(bench_format), configs, models, seeds, bench_jobs);
            std::ostringstream csv;
            std::ostringstream per_seed;
            std::ostringstream text;
            write_bench_csv(t, csv);
            write_bench_per_seed_csv(t, per_seed);
            write_bench_text(t, text);
            write_file(bench_out / "bench.csv", csv.str());
            write_file(bench_out / "bench_seeds.csv", per_seed.str());
            write_file(bench_out / "bench.txt", text.str());
            std::cout << text.str();
        }
    } catch (const Error& e) {
        return report_error(e.category(), e.what(), kExitError);
    } catch (const fs::filesystem_error& e) {
        return report_error("io", e.what(), kExitError);
    } catch (const std::exception& e) {
        return report_error("internal", e.what(), kExitError);
    }
    return 0;
}
