#pragma once

#include <string>
#include <vector>

#include "qkdopt/optimizer.hpp"

namespace qkdopt {

struct PassSample {
    double t_s = 0.0;
    double loss_db = 0.0;         // channel loss on the satellite arm
    double background_cps = 0.0;  // background rate at the satellite receiver
};

/// Time series for one satellite pass plus the fixed ground-side
/// parameters. The satellite arm carries the per-sample loss and
/// background; the ground arm keeps a constant channel efficiency.
struct PassProfile {
    std::vector<PassSample> samples;
    double ground_channel_eta = 1.0;
    double window_s = 0.5e-9;
};

/// Receiver detectors used on both arms unless overridden.
struct SatelliteDetector {
    double efficiency = 0.5;
    double dark_cps = 100.0;
};

enum class PassMode { Variable, Fixed };

struct PassModeResult {
    double total_key_bits = 0.0;
    double usable_seconds = 0.0;
    double eps_fixed = 0.0;  // only meaningful in Fixed mode
};

struct PassReport {
    double total_key_variable = 0.0;
    double total_key_fixed = 0.0;
    double additional_key = 0.0;
    double percent_increase = 0.0;
    double usable_seconds_variable = 0.0;
    double usable_seconds_fixed = 0.0;
};

/// Variable mode re-optimizes the squeezing parameter at every sample;
/// fixed mode picks the single value maximizing the whole pass's
/// integrated key. Key totals integrate SKR over time trapezoidally;
/// usable time sums the trapezoid weight of samples above the usability
/// threshold. An all-infeasible profile yields a zero-key result.
PassModeResult simulate_pass(const PassProfile& profile, PassMode mode,
                             const SatelliteDetector& det = {}, int trunc = 3);

/// Runs both modes and assembles the comparison.
PassReport pass_report(const PassProfile& profile, const SatelliteDetector& det = {},
                       int trunc = 3);

struct DetectorCatalogEntry {
    std::string name;
    double wavelength_nm = 0.0;
    double time_resolution_ps = 0.0;
    double efficiency = 0.0;
    double dark_cps = 0.0;
};

struct BudgetDuration {
    bool asymptotic = false;
    double seconds = 3600.0;

    static BudgetDuration Asymptotic() { return {true, 0.0}; }
    static BudgetDuration Seconds(double s) { return {false, s}; }
};

inline constexpr double kLossBudgetSearchCapDb = 80.0;

struct LossBudget {
    double channel_db = 0.0;         // total two-arm channel loss
    double with_detectors_db = 0.0;  // channel_db plus both detectors' loss in dB
    bool hit_search_cap = false;
};

/// Largest symmetric two-arm channel loss still delivering key_target
/// bits within the duration (asymptotic: any positive rate) at optimal
/// pumping. Bisection over [0, 80] dB at 0.1 dB resolution. window_s <= 0
/// selects the default of twice the detector time resolution.
LossBudget loss_budget(const DetectorCatalogEntry& det, BudgetDuration duration,
                       double key_target_bits, double window_s = 0.0, int trunc = 3);

/// Symmetric fiber reach: 2 * budget / attenuation.
double fiber_distance(double budget_db, double atten_db_per_km);

/// Per-window dark-probability ceiling for a positive key on this link.
double max_noise_for_link(double eta_a, double eta_b);

}  // namespace qkdopt
