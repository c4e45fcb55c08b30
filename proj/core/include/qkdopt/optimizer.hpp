#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "qkdopt/detection.hpp"
#include "qkdopt/fock_state.hpp"
#include "qkdopt/key_rate.hpp"

namespace qkdopt {

/// Result of maximizing the secure key rate over the squeezing parameter.
struct OptimumRecord {
    SqueezingParam eps_star;
    KeyMetrics metrics;
    double p_tf_star = 0.0;  // optimal two-fold coincidence probability per window
    double mu = 0.0;         // pair-generation probability at eps_star (unit detectors)
    bool trunc_converged = true;  // |SKR(trunc) - SKR(trunc+1)| / SKR(trunc+1) <= 1%
};

struct OptimizeOptions {
    double eps_max = 1.5;
    int coarse_points = 48;       // log-spaced scan before refinement
    double eps_tolerance = 1e-4;  // golden-section bracket width
    bool check_convergence = true;
    CoincidenceAveraging averaging = CoincidenceAveraging::BothBases;
};

/// No squeezing parameter yields a positive key on this link; carries the
/// best record found so callers can still inspect it.
class InfeasibleLinkError : public std::runtime_error {
public:
    InfeasibleLinkError(OptimumRecord best, const std::string& what)
        : std::runtime_error(what), best_(std::move(best)) {}
    const OptimumRecord& best() const { return best_; }

private:
    OptimumRecord best_;
};

/// Coarse log-spaced scan of the clamped SKR objective followed by
/// golden-section refinement. Deterministic; truncation overflow at
/// large eps acts as an upper search bound. Throws InfeasibleLinkError
/// when SKR <= 0 everywhere.
OptimumRecord optimal_epsilon(const LinkParams& link, int trunc,
                              const OptimizeOptions& opts = {});

/// Per-window probability that both source arms fire a unit-efficiency,
/// zero-dark bucket detector, i.e. that at least one pair is emitted.
double pair_generation_probability(SqueezingParam eps, int trunc);

struct SweepRow {
    double eta = 0.0;
    double d = 0.0;
    double eps_star = 0.0;
    double p_tf_star = 0.0;
    double skr_per_window = 0.0;
    double mu = 0.0;
    bool feasible = false;
};

/// Symmetric-link grid sweep (eta_a = eta_b = eta, d_a = d_b = d), rows
/// in row-major order over (eta, d). Infeasible points are marked, not
/// fatal. Convergence checking is disabled inside sweeps.
std::vector<SweepRow> sweep_grid(std::span<const double> eta_values,
                                 std::span<const double> d_values, int trunc,
                                 const OptimizeOptions& opts = {});

}  // namespace qkdopt
