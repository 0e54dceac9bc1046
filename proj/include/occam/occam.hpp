#pragma once

// Umbrella header for the OCCAM overlapping-community toolkit: generative
// model, synthetic sampler, spectral estimator, K-medians clustering,
// evaluation metrics, and the simulation harness.

#include "occam/assignment.hpp"
#include "occam/core_model.hpp"
#include "occam/errors.hpp"
#include "occam/experiments.hpp"
#include "occam/fit.hpp"
#include "occam/io.hpp"
#include "occam/kmedians.hpp"
#include "occam/metrics.hpp"
#include "occam/rng.hpp"
#include "occam/sampler.hpp"
#include "occam/spectral.hpp"
#include "occam/types.hpp"
