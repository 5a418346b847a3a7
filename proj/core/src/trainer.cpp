#include "drslf/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include "drslf/cg_solver.hpp"
#include "drslf/curvature.hpp"
#include "drslf/error.hpp"
#include "drslf/evaluation.hpp"
#include "drslf/format.hpp"

namespace drslf {

void OptimizerKind::validate() const {
    if (method != Method::sgdm) return;
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
        throw InvalidArgument("sgdm: learning_rate must be > 0");
    }
    if (!(momentum >= 0.0 && momentum < 1.0)) throw InvalidArgument("sgdm: momentum must lie in [0,1)");
}

const char* to_string(Method method) noexcept {
    switch (method) {
        case Method::drslf: return "drslf";
        case Method::slf: return "slf";
        case Method::sgdm: return "sgdm";
    }
    return "unknown";
}

Method parse_method(const std::string& name) {
    if (name == "drslf" || name == "M3") return Method::drslf;
    if (name == "slf" || name == "M2") return Method::slf;
    if (name == "sgdm" || name == "M1") return Method::sgdm;
    throw InvalidArgument("unknown model '" + name + "' (expected drslf|slf|sgdm or M1|M2|M3)");
}

const char* to_string(StopReason reason) noexcept {
    return reason == StopReason::patience ? "patience" : "max_epochs";
}

Hyperparams effective_hyperparams(const Hyperparams& h, const OptimizerKind& kind) {
    Hyperparams out = h;
    if (kind.method != Method::drslf) out.lambda_r1 = 0.0;
    return out;
}

bool BestSnapshot::offer(std::size_t epoch, double val_rmse, const FactorState& x) {
    if (!empty() && !(val_rmse < val_rmse_)) return false;
    epoch_ = epoch;
    val_rmse_ = val_rmse;
    state_ = x;
    return true;
}

FactorState restore_best(const TrainReport& report, const BestSnapshot& snapshot) {
    if (report.epochs.empty()) throw InvalidArgument("restore_best: report has no epochs");
    if (snapshot.empty() || snapshot.epoch() != report.best_epoch) {
        throw InvalidArgument("restore_best: snapshot epoch " + std::to_string(snapshot.epoch()) +
                              " does not match best epoch " + std::to_string(report.best_epoch));
    }
    return snapshot.state();
}

std::vector<std::size_t> sgd_epoch_order(std::size_t n, std::uint64_t seed, std::size_t epoch) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(epoch), static_cast<std::uint32_t>(epoch >> 32)};
    std::mt19937_64 rng(seq);
    std::shuffle(order.begin(), order.end(), rng);
    return order;
}

namespace {

struct StepOutcome {
    std::size_t inner_iters = 0;
    double model_change = 0.0;
    bool cg_converged = false;
};

StepOutcome newton_cg_step(FactorState& x, const IndexedDataset& train, const Hyperparams& h) {
    CurvatureContext ctx(x, train, h);
    const ParamVector g = gradient(x, train, h);
    const CgResult cg = cg_solve(
        [&ctx](const ParamVector& in, ParamVector& out) { ctx.damped_hvp(in, out); }, g, h.tau,
        h.cg_max_iters);
    x += cg.delta;
    return {cg.iterations, cg.model_change, cg.converged};
}

class MomentumSgd {
public:
    MomentumSgd(const Shape& shape, const OptimizerKind& kind) : velocity_(shape), kind_(kind) {}

    StepOutcome epoch(FactorState& x, const IndexedDataset& train, const Hyperparams& h,
                      std::size_t epoch_index) {
        const auto triples = train.triples();
        const std::size_t f = x.rank();
        const double eta = kind_.learning_rate;
        const double m = kind_.momentum;
        for (const std::size_t k : sgd_epoch_order(triples.size(), h.seed, epoch_index)) {
            const Triple& t = triples[k];
            auto xu = x.user(t.user);
            auto xs = x.service(t.service);
            auto vu = velocity_.user(t.user);
            auto vs = velocity_.service(t.service);
            const double err = t.value - predict_unchecked(x, t.user, t.service);
            for (std::size_t d = 0; d < f; ++d) {
                const double gu = -err * xs[d] + h.lambda_r2 * xu[d];
                const double gs = -err * xu[d] + h.lambda_r2 * xs[d];
                vu[d] = m * vu[d] - eta * gu;
                vs[d] = m * vs[d] - eta * gs;
                xu[d] += vu[d];
                xs[d] += vs[d];
            }
        }
        return {triples.size(), 0.0, false};
    }

private:
    ParamVector velocity_;
    OptimizerKind kind_;
};

}  // namespace

TrainResult train(const SplitDataset& split, const Hyperparams& h, const OptimizerKind& kind,
                  const TrainOptions& options) {
    h.validate();
    kind.validate();
    const Hyperparams eff = effective_hyperparams(h, kind);
    const IndexedDataset& train_set = split.train;

    FactorState x = init_factors(train_set.num_users(), train_set.num_services(), eff);
    TrainResult result;
    TrainReport& report = result.report;

    if (eff.max_epochs == 0) {
        report.best_val_rmse = rmse(x, split.validation);
        report.final_test_rmse = rmse(x, split.test);
        report.stop_reason = StopReason::max_epochs;
        result.factors = std::move(x);
        return result;
    }

    MomentumSgd sgd(x.shape(), kind);
    BestSnapshot best;
    std::size_t since_improvement = 0;
    report.stop_reason = StopReason::max_epochs;

    for (std::size_t epoch = 1; epoch <= eff.max_epochs; ++epoch) {
        const auto start = std::chrono::steady_clock::now();
        StepOutcome step;
        try {
            step = kind.method == Method::sgdm ? sgd.epoch(x, train_set, eff, epoch)
                                               : newton_cg_step(x, train_set, eff);
        } catch (const SolverError& e) {
            throw TrainingError(e.what(), epoch);
        }

        EpochRecord rec;
        rec.epoch = epoch;
        rec.train_rmse = rmse(x, train_set);
        rec.val_rmse = rmse(x, split.validation);
        rec.inner_iters = step.inner_iters;
        rec.model_change = step.model_change;
        rec.cg_converged = step.cg_converged;
        if (options.record_wall_time) {
            rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                              .count();
        }
        if (!std::isfinite(rec.train_rmse) || !std::isfinite(rec.val_rmse)) {
            throw TrainingError("non-finite RMSE (train " + format_double(rec.train_rmse) +
                                    ", validation " + format_double(rec.val_rmse) + ")",
                                epoch);
        }
        report.epochs.push_back(rec);
        if (options.on_epoch) options.on_epoch(rec, x);

        if (best.offer(epoch, rec.val_rmse, x)) {
            since_improvement = 0;
        } else {
            ++since_improvement;
        }
        if (eff.patience > 0 && since_improvement >= eff.patience) {
            report.stop_reason = StopReason::patience;
            break;
        }
    }

    report.best_epoch = best.epoch();
    report.best_val_rmse = best.val_rmse();
    result.factors = restore_best(report, best);
    report.final_test_rmse = rmse(result.factors, split.test);
    return result;
}

void write_report_csv(const TrainReport& report, std::ostream& out) {
    out << "epoch,train_rmse,val_rmse,inner_iters,wall_ms\n";
    for (const EpochRecord& r : report.epochs) {
        out << r.epoch << ',' << format_double(r.train_rmse) << ',' << format_double(r.val_rmse)
            << ',' << r.inner_iters << ',' << format_double(r.wall_ms) << '\n';
    }
}

std::string summary_line(const TrainReport& report, const OptimizerKind& kind) {
    std::ostringstream os;
    os << "model=" << to_string(kind.method) << " epochs=" << report.epochs.size()
       << " best_epoch=" << report.best_epoch << " best_val_rmse=" << format_double(report.best_val_rmse)
       << " final_test_rmse=" << format_double(report.final_test_rmse)
       << " stop_reason=" << to_string(report.stop_reason);
    return os.str();
}

}  // namespace drslf
