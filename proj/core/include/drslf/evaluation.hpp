#pragma once

#include "drslf/data.hpp"
#include "drslf/factor_state.hpp"

namespace drslf {

// sqrt(mean over eval_set of (q - <x_u, x_s>)^2), raw predictions without
// clamping. Throws InvalidArgument on an empty set.
double rmse(const FactorState& x, const IndexedDataset& eval_set);

}  // namespace drslf
