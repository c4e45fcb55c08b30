#include "qkdopt/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "qkdopt/errors.hpp"

namespace qkdopt {

namespace {

struct Sample {
    double eps = 0.0;
    std::optional<KeyMetrics> metrics;  // empty when truncation overflowed

    double objective() const {
        return metrics ? std::max(0.0, metrics->skr_per_window) : -1.0;
    }
};

Sample evaluate(double eps, const LinkParams& link, int trunc,
                CoincidenceAveraging avg) {
    Sample s;
    s.eps = eps;
    try {
        const FockState4 state = spdc_state({eps}, trunc);
        s.metrics = compute_metrics(state, link, avg);
    } catch (const TruncationOverflowError&) {
        // Past the usable truncation range; acts as an upper search bound.
    }
    return s;
}

// Golden-section maximization of the clamped SKR on [lo, hi].
Sample golden_refine(double lo, double hi, const LinkParams& link, int trunc,
                     CoincidenceAveraging avg, double tol) {
    constexpr double invphi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    Sample s1 = evaluate(x1, link, trunc, avg);
    Sample s2 = evaluate(x2, link, trunc, avg);
    while (b - a > tol) {
        if (s1.objective() >= s2.objective()) {
            b = x2;
            x2 = x1;
            s2 = s1;
            x1 = b - invphi * (b - a);
            s1 = evaluate(x1, link, trunc, avg);
        } else {
            a = x1;
            x1 = x2;
            s1 = s2;
            x2 = a + invphi * (b - a);
            s2 = evaluate(x2, link, trunc, avg);
        }
    }
    return s1.objective() >= s2.objective() ? s1 : s2;
}

OptimumRecord search(const LinkParams& link, int trunc, const OptimizeOptions& opts) {
    link.validate();
    if (trunc < 2) throw std::invalid_argument("optimal_epsilon: trunc must be >= 2");

    // Coarse scan: eps = 0 plus a log-spaced ladder up to eps_max.
    const int n = std::max(8, opts.coarse_points);
    const double eps_lo = 1e-3;
    std::vector<Sample> scan;
    scan.reserve(n + 1);
    scan.push_back(evaluate(0.0, link, trunc, opts.averaging));
    for (int i = 0; i < n; ++i) {
        const double eps =
            eps_lo * std::pow(opts.eps_max / eps_lo, static_cast<double>(i) / (n - 1));
        scan.push_back(evaluate(eps, link, trunc, opts.averaging));
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i < scan.size(); ++i)
        if (scan[i].objective() > scan[best].objective()) best = i;

    const double lo = (best > 0) ? scan[best - 1].eps : 0.0;
    const double hi = (best + 1 < scan.size() && scan[best + 1].metrics)
                          ? scan[best + 1].eps
                          : scan[best].eps;
    Sample winner =
        (hi > lo) ? golden_refine(lo, hi, link, trunc, opts.averaging, opts.eps_tolerance)
                  : scan[best];
    if (scan[best].objective() > winner.objective()) winner = scan[best];

    OptimumRecord rec;
    rec.eps_star = {winner.eps};
    rec.metrics = winner.metrics.value_or(KeyMetrics{});
    rec.p_tf_star = rec.metrics.q_coinc;
    rec.mu = pair_generation_probability(rec.eps_star, trunc);

    if (rec.metrics.skr_per_window <= 0.0) {
        throw InfeasibleLinkError(rec, "optimal_epsilon: no positive key rate for eta_a=" +
                                           std::to_string(link.eta_a) + ", eta_b=" +
                                           std::to_string(link.eta_b) + ", d_a=" +
                                           std::to_string(link.d_a) + ", d_b=" +
                                           std::to_string(link.d_b));
    }
    return rec;
}

}  // namespace

OptimumRecord optimal_epsilon(const LinkParams& link, int trunc,
                              const OptimizeOptions& opts) {
    OptimumRecord rec = search(link, trunc, opts);
    if (opts.check_convergence) {
        OptimizeOptions finer = opts;
        finer.check_convergence = false;
        try {
            const OptimumRecord up = search(link, trunc + 1, finer);
            const double ref = std::abs(up.metrics.skr_per_window);
            rec.trunc_converged =
                ref > 0.0 &&
                std::abs(rec.metrics.skr_per_window - up.metrics.skr_per_window) / ref <= 0.01;
        } catch (const InfeasibleLinkError&) {
            rec.trunc_converged = false;
        }
    }
    return rec;
}

double pair_generation_probability(SqueezingParam eps, int trunc) {
    const FockState4 state = spdc_state(eps, trunc);
    const auto probs = number_distribution(state);
    // Both arms see >= 1 photon: complement of either party's vacuum.
    double p_alice_vac = 0.0, p_bob_vac = 0.0, p_both_vac = 0.0;
    const int T = trunc;
    for (int nah = 0; nah <= T; ++nah)
        for (int nav = 0; nav <= T; ++nav)
            for (int nbh = 0; nbh <= T; ++nbh)
                for (int nbv = 0; nbv <= T; ++nbv) {
                    const double p = probs[state.index(nah, nav, nbh, nbv)];
                    if (nah + nav == 0) p_alice_vac += p;
                    if (nbh + nbv == 0) p_bob_vac += p;
                    if (nah + nav == 0 && nbh + nbv == 0) p_both_vac += p;
                }
    return 1.0 - p_alice_vac - p_bob_vac + p_both_vac;
}

std::vector<SweepRow> sweep_grid(std::span<const double> eta_values,
                                 std::span<const double> d_values, int trunc,
                                 const OptimizeOptions& opts) {
    for (double eta : eta_values)
        if (eta < 0.0 || eta > 1.0)
            throw std::invalid_argument("sweep_grid: eta values must be in [0,1]");
    for (double d : d_values)
        if (d < 0.0 || d > 0.1)
            throw std::invalid_argument("sweep_grid: d values must be in [0,0.1]");

    OptimizeOptions point_opts = opts;
    point_opts.check_convergence = false;

    std::vector<SweepRow> rows;
    rows.reserve(eta_values.size() * d_values.size());
    for (double eta : eta_values) {
        for (double d : d_values) {
            LinkParams link;
            link.eta_a = link.eta_b = eta;
            link.d_a = link.d_b = d;
            SweepRow row;
            row.eta = eta;
            row.d = d;
            try {
                const OptimumRecord rec = optimal_epsilon(link, trunc, point_opts);
                row.eps_star = rec.eps_star.epsilon;
                row.p_tf_star = rec.p_tf_star;
                row.skr_per_window = rec.metrics.skr_per_window;
                row.mu = rec.mu;
                row.feasible = true;
            } catch (const InfeasibleLinkError& e) {
                row.eps_star = e.best().eps_star.epsilon;
                row.p_tf_star = e.best().p_tf_star;
                row.skr_per_window = e.best().metrics.skr_per_window;
                row.mu = e.best().mu;
                row.feasible = false;
            }
            rows.push_back(row);
        }
    }
    return rows;
}

}  // namespace qkdopt
