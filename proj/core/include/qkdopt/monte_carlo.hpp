#pragma once

#include <cstdint>

#include "qkdopt/detection.hpp"
#include "qkdopt/fock_state.hpp"

namespace qkdopt {

/// Sampled estimates with binomial standard errors.
struct McEstimate {
    double q = 0.0;
    double q_se = 0.0;
    double delta1 = 0.0;
    double delta1_se = 0.0;
    long samples = 0;
    long coincidences = 0;
    long z_coincidences = 0;
};

/// Monte-Carlo cross-check of the analytic click-outcome pipeline.
///
/// Each window picks a matched basis pairing (Z/Z or X/X, equal odds),
/// draws a photon-number outcome from the rotated state's distribution,
/// thins each mode by Binomial(eta), adds Poisson darks per detector,
/// and coin-flips double clicks. Q is estimated over all windows, delta1
/// over the Z/Z coincidences. Deliberately avoids party_outcome /
/// joint_click_distribution so it stays an independent oracle.
McEstimate mc_metrics(const FockState4& state, const LinkParams& link, long samples,
                      std::uint64_t seed);

}  // namespace qkdopt
