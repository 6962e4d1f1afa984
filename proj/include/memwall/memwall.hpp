#pragma once

// Umbrella header for the analytical Transformer performance model.

#include "memwall/checked.hpp"
#include "memwall/cost_model.hpp"
#include "memwall/csv.hpp"
#include "memwall/errors.hpp"
#include "memwall/model_spec.hpp"
#include "memwall/report.hpp"
#include "memwall/roofline.hpp"
#include "memwall/train_memory.hpp"
#include "memwall/trends.hpp"
