#pragma once

#include <vector>

#include "qkdopt/optimizer.hpp"

namespace qkdopt {

/// Fitted constants of the closed-form optimal two-fold model.
struct ModelConstants {
    double a = 0.03579;
    double b = 0.23;
    double c = 1.162;
    double d_const = 2.496;
    double e = -0.002444;
};

/// P_tf = A sqrt(ea eb) + B (sqrt(ea eb)^3 sin(C - D sqrt(ea eb) - ea - eb)
///        - da - db) + E.
/// The raw value is returned; a negative result means the model marks the
/// link infeasible (use model_feasible), it is never clamped here.
double eval_optimal_tf(double eta_a, double eta_b, double d_a, double d_b,
                       const ModelConstants& k = {});

inline bool model_feasible(double p_tf) { return p_tf > 0.0; }

/// Maximum tolerable per-detector dark probability per window for a
/// positive key: d <= 0.0732 ea eb / (ea + eb).
double noise_budget(double eta_a, double eta_b);

struct RefitResult {
    ModelConstants constants;
    double rms_refit = 0.0;  // RMS residual of the refit constants
    double rms_paper = 0.0;  // RMS residual of the seed constants, same rows
    int points_used = 0;
};

/// Damped (Levenberg-Marquardt) least squares of all five constants in
/// the fixed functional form against a symmetric sweep's p_tf_star,
/// seeded at the published constants. Needs >= 50 feasible rows.
RefitResult refit_constants(const std::vector<SweepRow>& sweep,
                            const ModelConstants& seed = {});

struct ResidualStats {
    std::vector<double> rel_errors;  // per feasible point, |model - sim| / sim
    double median = 0.0;
    double max = 0.0;
    int points = 0;
};

/// Model-versus-simulation relative errors on rows where both sides are
/// feasible.
ResidualStats compare_model_vs_sim(const std::vector<SweepRow>& sweep,
                                   const ModelConstants& k = {});

}  // namespace qkdopt
