#pragma once

#include "qkdopt/detection.hpp"
#include "qkdopt/fock_state.hpp"

namespace qkdopt {

/// Per-window key figures. skr_per_window keeps the raw (possibly
/// negative) value; skr_per_second is clamped at zero and divided by the
/// coincidence window.
struct KeyMetrics {
    double q_coinc = 0.0;
    double delta1 = 0.0;
    double delta2 = 0.0;
    double skr_per_window = 0.0;
    double skr_per_second = 0.0;
    bool delta_defined = false;  // false when no coincidences occur
};

/// Whether Q averages the Z/Z and X/X tables or uses Z/Z alone.
enum class CoincidenceAveraging { BothBases, ZOnly };

/// Minimum rate for exchanging a positive key within an hour.
inline constexpr double kUsableSkrBitsPerSecond = 14.0;

/// H(x) = -x log2 x - (1-x) log2(1-x), continuously extended to 0 at the
/// endpoints.
double binary_entropy(double delta);

/// Error-correction efficiency trend f(delta) = 1.169 + delta.
double ec_efficiency(double delta);

/// Asymptotic secure key bits per window:
/// q * Q * (1 - f(d1) H(d1) - H(d2)) with basis reconciliation q = 1/2.
/// Negative values are returned raw; callers clamp where needed.
double skr(double q_coinc, double delta1, double delta2);

KeyMetrics compute_metrics(const FockState4& state, const LinkParams& link,
                           CoincidenceAveraging avg = CoincidenceAveraging::BothBases);

bool usable(double skr_per_second);

}  // namespace qkdopt
