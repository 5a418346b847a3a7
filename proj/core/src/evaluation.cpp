#include "drslf/evaluation.hpp"

#include <cmath>

#include "drslf/error.hpp"
#include "drslf/factor_model.hpp"

namespace drslf {

double rmse(const FactorState& x, const IndexedDataset& eval_set) {
    if (eval_set.empty()) throw InvalidArgument("rmse: empty evaluation set");
    if (x.num_users() != eval_set.num_users() || x.num_services() != eval_set.num_services()) {
        throw ShapeError("rmse: factor state and evaluation set dimensions differ");
    }
    double acc = 0.0;
    for (const Triple& t : eval_set.triples()) {
        const double r = t.value - predict_unchecked(x, t.user, t.service);
        acc += r * r;
    }
    return std::sqrt(acc / static_cast<double>(eval_set.size()));
}

}  // namespace drslf
