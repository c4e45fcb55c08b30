#include "qkdopt/key_rate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qkdopt {

double binary_entropy(double delta) {
    if (delta < 0.0 || delta > 1.0)
        throw std::invalid_argument("binary_entropy: argument must be in [0,1]");
    if (delta == 0.0 || delta == 1.0) return 0.0;
    return -delta * std::log2(delta) - (1.0 - delta) * std::log2(1.0 - delta);
}

double ec_efficiency(double delta) {
    if (delta < 0.0 || delta > 0.5)
        throw std::invalid_argument("ec_efficiency: argument must be in [0,0.5]");
    return 1.169 + delta;
}

double skr(double q_coinc, double delta1, double delta2) {
    if (q_coinc < 0.0 || q_coinc > 1.0)
        throw std::invalid_argument("skr: Q must be in [0,1]");
    if (q_coinc == 0.0) return 0.0;
    constexpr double q_sift = 0.5;
    return q_sift * q_coinc *
           (1.0 - ec_efficiency(delta1) * binary_entropy(delta1) - binary_entropy(delta2));
}

KeyMetrics compute_metrics(const FockState4& state, const LinkParams& link,
                           CoincidenceAveraging avg) {
    link.validate();

    const OutcomeTable zz = joint_click_distribution(state, Basis::Z, Basis::Z, link);
    const OutcomeTable xx = joint_click_distribution(state, Basis::X, Basis::X, link);

    const double qz = zz.coincidence();
    const double qx = xx.coincidence();

    KeyMetrics m;
    m.q_coinc = (avg == CoincidenceAveraging::BothBases) ? 0.5 * (qz + qx) : qz;

    if (qz <= 0.0 || qx <= 0.0) {
        // Degenerate link: no coincidences, no key.
        m.delta_defined = false;
        return m;
    }

    m.delta_defined = true;
    m.delta1 = zz.mismatch() / qz;
    m.delta2 = xx.mismatch() / qx;
    // Randomized doubles keep errors at or below one half; guard rounding.
    m.delta1 = std::clamp(m.delta1, 0.0, 0.5);
    m.delta2 = std::clamp(m.delta2, 0.0, 0.5);

    m.skr_per_window = skr(m.q_coinc, m.delta1, m.delta2);
    m.skr_per_second = std::max(0.0, m.skr_per_window) / link.window;
    return m;
}

bool usable(double skr_per_second) { return skr_per_second > kUsableSkrBitsPerSecond; }

}  // namespace qkdopt
