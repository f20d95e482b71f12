#pragma once

#include <string>

#include "ostd/ensemble.hpp"
#include "ostd/posterior.hpp"
#include "ostd/random_features.hpp"

namespace ostd {

// Text snapshots (JSON). The feature map stores only (family, lengthscale,
// magnitude, D, d, seed); frequencies are re-derived from the seed on load.
// The posterior stores the flat mean, row-major covariance, slot and
// hyperparameters. An ensemble snapshot is the expert list plus weights.

std::string to_snapshot(const RFMap& map);
RFMap rf_map_from_snapshot(const std::string& text);

std::string to_snapshot(const PosteriorState& state);
PosteriorState posterior_from_snapshot(const std::string& text);

std::string to_snapshot(const EnsembleState& ensemble);
EnsembleState ensemble_from_snapshot(const std::string& text);

}  // namespace ostd
