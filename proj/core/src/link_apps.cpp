#include "qkdopt/link_apps.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qkdopt/errors.hpp"
#include "qkdopt/model.hpp"

namespace qkdopt {

namespace {

void validate_profile(const PassProfile& profile) {
    if (profile.samples.empty())
        throw std::invalid_argument("simulate_pass: empty profile");
    if (profile.window_s <= 0.0)
        throw std::invalid_argument("simulate_pass: window must be > 0");
    for (std::size_t i = 0; i < profile.samples.size(); ++i) {
        const auto& s = profile.samples[i];
        if (s.loss_db < 0.0 || s.background_cps < 0.0)
            throw std::invalid_argument("simulate_pass: negative loss or background at row " +
                                        std::to_string(i));
        if (i > 0 && s.t_s <= profile.samples[i - 1].t_s)
            throw std::invalid_argument(
                "simulate_pass: sample times must be strictly increasing (row " +
                std::to_string(i) + ")");
    }
}

LinkParams link_at(const PassProfile& profile, const PassSample& sample,
                   const SatelliteDetector& det) {
    LinkParams link;
    link.window = profile.window_s;
    // Ground arm: local channel times detector efficiency, intrinsic darks.
    link.eta_a = profile.ground_channel_eta * det.efficiency;
    link.d_a = det.dark_cps * link.window;
    // Satellite arm: profile loss and background on top of the detector.
    link.eta_b = std::pow(10.0, -sample.loss_db / 10.0) * det.efficiency;
    link.d_b = (det.dark_cps + sample.background_cps) * link.window;
    return link;
}

// Trapezoidal weight of each sample in seconds.
std::vector<double> trapezoid_weights(const std::vector<PassSample>& samples) {
    const std::size_t n = samples.size();
    std::vector<double> w(n, 0.0);
    if (n < 2) return w;
    w[0] = 0.5 * (samples[1].t_s - samples[0].t_s);
    w[n - 1] = 0.5 * (samples[n - 1].t_s - samples[n - 2].t_s);
    for (std::size_t i = 1; i + 1 < n; ++i)
        w[i] = 0.5 * (samples[i + 1].t_s - samples[i - 1].t_s);
    return w;
}

double skr_at(const FockState4& state, const LinkParams& link) {
    return compute_metrics(state, link).skr_per_second;
}

// Total integrated key over the pass for one squeezing parameter.
double pass_key_at_eps(double eps, const PassProfile& profile,
                       const std::vector<LinkParams>& links,
                       const std::vector<double>& weights, int trunc) {
    FockState4 state(trunc);
    try {
        state = spdc_state({eps}, trunc);
    } catch (const TruncationOverflowError&) {
        return -1.0;
    }
    double total = 0.0;
    for (std::size_t i = 0; i < links.size(); ++i)
        total += weights[i] * skr_at(state, links[i]);
    return total;
}

// Coarse-scan plus golden-section maximization of the pass total.
double best_fixed_eps(const PassProfile& profile, const std::vector<LinkParams>& links,
                      const std::vector<double>& weights, int trunc) {
    constexpr double eps_lo = 1e-3, eps_max = 1.5;
    constexpr int n = 48;
    double best_eps = 0.0, best_val = 0.0;
    std::vector<double> grid{0.0};
    for (int i = 0; i < n; ++i)
        grid.push_back(eps_lo * std::pow(eps_max / eps_lo, static_cast<double>(i) / (n - 1)));
    std::size_t best_i = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double v = pass_key_at_eps(grid[i], profile, links, weights, trunc);
        if (v > best_val) {
            best_val = v;
            best_i = i;
        }
    }
    best_eps = grid[best_i];

    double a = (best_i > 0) ? grid[best_i - 1] : 0.0;
    double b = (best_i + 1 < grid.size()) ? grid[best_i + 1] : grid[best_i];
    constexpr double invphi = 0.6180339887498949;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = pass_key_at_eps(x1, profile, links, weights, trunc);
    double f2 = pass_key_at_eps(x2, profile, links, weights, trunc);
    while (b - a > 1e-4) {
        if (f1 >= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = pass_key_at_eps(x1, profile, links, weights, trunc);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = pass_key_at_eps(x2, profile, links, weights, trunc);
        }
    }
    const double refined = (f1 >= f2) ? x1 : x2;
    if (pass_key_at_eps(refined, profile, links, weights, trunc) >= best_val)
        best_eps = refined;
    return best_eps;
}

}  // namespace

PassModeResult simulate_pass(const PassProfile& profile, PassMode mode,
                             const SatelliteDetector& det, int trunc) {
    validate_profile(profile);

    std::vector<LinkParams> links;
    links.reserve(profile.samples.size());
    for (const auto& s : profile.samples) links.push_back(link_at(profile, s, det));
    const auto weights = trapezoid_weights(profile.samples);

    PassModeResult result;
    OptimizeOptions opts;
    opts.check_convergence = false;

    if (mode == PassMode::Variable) {
        for (std::size_t i = 0; i < links.size(); ++i) {
            double rate = 0.0;
            try {
                rate = optimal_epsilon(links[i], trunc, opts).metrics.skr_per_second;
            } catch (const InfeasibleLinkError&) {
                rate = 0.0;  // sample contributes no key
            }
            result.total_key_bits += weights[i] * rate;
            if (usable(rate)) result.usable_seconds += weights[i];
        }
    } else {
        const double eps = best_fixed_eps(profile, links, weights, trunc);
        result.eps_fixed = eps;
        FockState4 state = spdc_state({eps}, trunc);
        for (std::size_t i = 0; i < links.size(); ++i) {
            const double rate = skr_at(state, links[i]);
            result.total_key_bits += weights[i] * rate;
            if (usable(rate)) result.usable_seconds += weights[i];
        }
    }
    return result;
}

PassReport pass_report(const PassProfile& profile, const SatelliteDetector& det,
                       int trunc) {
    const PassModeResult var = simulate_pass(profile, PassMode::Variable, det, trunc);
    const PassModeResult fix = simulate_pass(profile, PassMode::Fixed, det, trunc);

    PassReport report;
    report.total_key_variable = var.total_key_bits;
    report.total_key_fixed = fix.total_key_bits;
    report.additional_key = std::max(0.0, var.total_key_bits - fix.total_key_bits);
    report.percent_increase =
        (fix.total_key_bits > 0.0) ? 100.0 * report.additional_key / fix.total_key_bits
                                   : 0.0;
    report.usable_seconds_variable = var.usable_seconds;
    report.usable_seconds_fixed = fix.usable_seconds;
    return report;
}

LossBudget loss_budget(const DetectorCatalogEntry& det, BudgetDuration duration,
                       double key_target_bits, double window_s, int trunc) {
    if (key_target_bits <= 0.0)
        throw std::invalid_argument("loss_budget: key target must be > 0");
    if (det.efficiency <= 0.0 || det.efficiency > 1.0)
        throw std::invalid_argument("loss_budget: detector efficiency must be in (0,1]");

    const double window = (window_s > 0.0) ? window_s : 2.0 * det.time_resolution_ps * 1e-12;
    if (window <= 0.0)
        throw std::invalid_argument("loss_budget: window and time resolution both unset");

    OptimizeOptions opts;
    opts.check_convergence = false;

    auto feasible = [&](double total_channel_db) {
        LinkParams link;
        link.window = window;
        const double arm = std::pow(10.0, -(total_channel_db / 2.0) / 10.0);
        link.eta_a = link.eta_b = arm * det.efficiency;
        link.d_a = link.d_b = det.dark_cps * window;
        try {
            const double rate = optimal_epsilon(link, trunc, opts).metrics.skr_per_second;
            return duration.asymptotic ? (rate > 0.0)
                                       : (rate * duration.seconds >= key_target_bits);
        } catch (const InfeasibleLinkError&) {
            return false;
        }
    };

    if (!feasible(0.0))
        throw InfeasibleDetectorError("loss_budget: '" + det.name +
                                      "' cannot reach the key target even at 0 dB");

    LossBudget budget;
    const double det_loss_db = 2.0 * (-10.0 * std::log10(det.efficiency));
    if (feasible(kLossBudgetSearchCapDb)) {
        budget.channel_db = kLossBudgetSearchCapDb;
        budget.hit_search_cap = true;
    } else {
        double lo = 0.0, hi = kLossBudgetSearchCapDb;
        while (hi - lo > 0.1) {
            const double mid = 0.5 * (lo + hi);
            (feasible(mid) ? lo : hi) = mid;
        }
        budget.channel_db = lo;
    }
    budget.with_detectors_db = budget.channel_db + det_loss_db;
    return budget;
}

double fiber_distance(double budget_db, double atten_db_per_km) {
    if (atten_db_per_km <= 0.0)
        throw std::invalid_argument("fiber_distance: attenuation must be > 0");
    if (budget_db < 0.0)
        throw std::invalid_argument("fiber_distance: budget must be >= 0");
    return 2.0 * budget_db / atten_db_per_km;
}

double max_noise_for_link(double eta_a, double eta_b) { return noise_budget(eta_a, eta_b); }

}  // namespace qkdopt
