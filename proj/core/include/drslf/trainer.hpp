#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "drslf/data.hpp"
#include "drslf/factor_model.hpp"
#include "drslf/factor_state.hpp"

namespace drslf {

enum class Method {
    drslf,  // Newton-CG on the smooth-L1 + L2 objective
    slf,    // Newton-CG with lambda_r1 forced to 0
    sgdm,   // momentum SGD on the L2-regularized per-observation loss
};

struct OptimizerKind {
    Method method = Method::drslf;
    // SGDM only.
    double learning_rate = 0.01;
    double momentum = 0.9;

    static OptimizerKind drslf() { return {Method::drslf}; }
    static OptimizerKind slf() { return {Method::slf}; }
    static OptimizerKind sgdm(double learning_rate, double momentum) {
        return {Method::sgdm, learning_rate, momentum};
    }

    void validate() const;

    friend bool operator==(const OptimizerKind&, const OptimizerKind&) = default;
};

const char* to_string(Method method) noexcept;
// Accepts drslf/slf/sgdm and the benchmark labels M3/M2/M1.
Method parse_method(const std::string& name);

// Hyperparameters actually used by a method (SLF and SGDM zero lambda_r1).
Hyperparams effective_hyperparams(const Hyperparams& h, const OptimizerKind& kind);

struct EpochRecord {
    std::size_t epoch = 0;  // 1-based
    double train_rmse = 0.0;
    double val_rmse = 0.0;
    std::size_t inner_iters = 0;  // CG iterations, or SGD steps for SGDM
    double wall_ms = 0.0;
    // Second-order methods only: <g, dX> + 1/2 <dX, A dX> of the CG step.
    double model_change = 0.0;
    bool cg_converged = false;

    friend bool operator==(const EpochRecord&, const EpochRecord&) = default;
};

enum class StopReason { patience, max_epochs };

const char* to_string(StopReason reason) noexcept;

struct TrainReport {
    std::vector<EpochRecord> epochs;
    double final_test_rmse = 0.0;
    std::size_t best_epoch = 0;  // 0 only when no epoch ran
    double best_val_rmse = 0.0;
    StopReason stop_reason = StopReason::max_epochs;

    friend bool operator==(const TrainReport&, const TrainReport&) = default;
};

// Rolling best-validation snapshot kept by the early-stopping loop.
class BestSnapshot {
public:
    // Keeps `x` when val_rmse is strictly below the current best.
    bool offer(std::size_t epoch, double val_rmse, const FactorState& x);

    bool empty() const noexcept { return epoch_ == 0; }
    std::size_t epoch() const noexcept { return epoch_; }
    double val_rmse() const noexcept { return val_rmse_; }
    const FactorState& state() const noexcept { return state_; }

private:
    std::size_t epoch_ = 0;
    double val_rmse_ = 0.0;
    FactorState state_;
};

// Parameters of report.best_epoch. Throws InvalidArgument on an empty report
// or a snapshot that does not belong to the report.
FactorState restore_best(const TrainReport& report, const BestSnapshot& snapshot);

struct TrainOptions {
    // Off by default so that reports are reproducible byte for byte.
    bool record_wall_time = false;
    // Called after every epoch with the updated parameters.
    std::function<void(const EpochRecord&, const FactorState&)> on_epoch;
};

struct TrainResult {
    FactorState factors;  // best-validation-epoch parameters
    TrainReport report;
};

TrainResult train(const SplitDataset& split, const Hyperparams& h, const OptimizerKind& kind,
                  const TrainOptions& options = {});

// Visiting order of training observations in SGDM epoch `epoch` (1-based).
std::vector<std::size_t> sgd_epoch_order(std::size_t n, std::uint64_t seed, std::size_t epoch);

// CSV with header "epoch,train_rmse,val_rmse,inner_iters,wall_ms".
void write_report_csv(const TrainReport& report, std::ostream& out);
// Single "key=value ..." line.
std::string summary_line(const TrainReport& report, const OptimizerKind& kind);

}  // namespace drslf
