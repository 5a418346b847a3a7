#pragma once

#include "drslf/bench.hpp"
#include "drslf/cg_solver.hpp"
#include "drslf/curvature.hpp"
#include "drslf/data.hpp"
#include "drslf/error.hpp"
#include "drslf/evaluation.hpp"
#include "drslf/factor_model.hpp"
#include "drslf/factor_state.hpp"
#include "drslf/format.hpp"
#include "drslf/grid_search.hpp"
#include "drslf/param_vector.hpp"
#include "drslf/trainer.hpp"
