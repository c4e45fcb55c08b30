#include "qkdopt/detection.hpp"

#include <cmath>
#include <stdexcept>

namespace qkdopt {

void LinkParams::validate() const {
    if (eta_a < 0.0 || eta_a > 1.0 || eta_b < 0.0 || eta_b > 1.0)
        throw std::invalid_argument("LinkParams: efficiencies must be in [0,1]");
    if (d_a < 0.0 || d_b < 0.0)
        throw std::invalid_argument("LinkParams: dark probabilities must be >= 0");
    if (window <= 0.0)
        throw std::invalid_argument("LinkParams: window must be > 0");
}

double OutcomeTable::coincidence() const {
    return at(Click::H, Click::H) + at(Click::H, Click::V) +
           at(Click::V, Click::H) + at(Click::V, Click::V);
}

double OutcomeTable::mismatch() const {
    return at(Click::H, Click::V) + at(Click::V, Click::H);
}

double p_count(int k, int i, const DetectorSpec& det) {
    if (k < 0 || i < 0) throw std::invalid_argument("p_count: k and i must be >= 0");
    const double eta = det.efficiency;
    const double n = det.dark_prob;
    double total = 0.0;
    double poisson = std::exp(-n);  // D(n,0)
    for (int d = 0; d <= k; ++d) {
        const int detected = k - d;
        if (detected <= i) {
            double binom = 1.0;
            for (int j = 0; j < detected; ++j)
                binom *= static_cast<double>(i - j) / (j + 1);
            total += poisson * binom * std::pow(eta, detected) *
                     std::pow(1.0 - eta, i - detected);
        }
        poisson *= n / (d + 1);
    }
    return total;
}

double p_click(int i, const DetectorSpec& det) {
    if (i < 0) throw std::invalid_argument("p_click: i must be >= 0");
    return 1.0 - std::exp(-det.dark_prob) * std::pow(1.0 - det.efficiency, i);
}

PartyOutcome party_outcome(double p_click_h, double p_click_v) {
    if (p_click_h < 0.0 || p_click_h > 1.0 || p_click_v < 0.0 || p_click_v > 1.0)
        throw std::invalid_argument("party_outcome: click probabilities must be in [0,1]");
    PartyOutcome out;
    out.p_double = p_click_h * p_click_v;
    out.p_h = p_click_h * (1.0 - p_click_v) + 0.5 * out.p_double;
    out.p_v = p_click_v * (1.0 - p_click_h) + 0.5 * out.p_double;
    out.p_none = (1.0 - p_click_h) * (1.0 - p_click_v);
    return out;
}

OutcomeTable joint_click_distribution(const FockState4& state, Basis basis_a,
                                      Basis basis_b, const LinkParams& link) {
    link.validate();

    const FockState4* measured = &state;
    FockState4 rotated(state.trunc());
    if (basis_a == Basis::X || basis_b == Basis::X) {
        rotated = state;
        if (basis_a == Basis::X) rotated = rotate_basis(rotated, Party::Alice);
        if (basis_b == Basis::X) rotated = rotate_basis(rotated, Party::Bob);
        measured = &rotated;
    }

    const auto probs = number_distribution(*measured);
    const int T = state.trunc();
    const DetectorSpec det_a{link.eta_a, link.d_a};
    const DetectorSpec det_b{link.eta_b, link.d_b};

    // Click probabilities per incident photon number, 0..trunc.
    std::vector<double> pc_a(T + 1), pc_b(T + 1);
    for (int i = 0; i <= T; ++i) {
        pc_a[i] = p_click(i, det_a);
        pc_b[i] = p_click(i, det_b);
    }

    OutcomeTable table;
    for (int nah = 0; nah <= T; ++nah) {
        for (int nav = 0; nav <= T; ++nav) {
            const PartyOutcome a = party_outcome(pc_a[nah], pc_a[nav]);
            const double wa[4] = {a.p_h, a.p_v, 0.0, a.p_none};
            for (int nbh = 0; nbh <= T; ++nbh) {
                for (int nbv = 0; nbv <= T; ++nbv) {
                    const double p = probs[state.index(nah, nav, nbh, nbv)];
                    if (p == 0.0) continue;
                    const PartyOutcome b = party_outcome(pc_b[nbh], pc_b[nbv]);
                    const double wb[4] = {b.p_h, b.p_v, 0.0, b.p_none};
                    for (int oa = 0; oa < 4; ++oa) {
                        if (wa[oa] == 0.0) continue;
                        for (int ob = 0; ob < 4; ++ob)
                            table.p[oa][ob] += p * wa[oa] * wb[ob];
                    }
                }
            }
        }
    }
    return table;
}

}  // namespace qkdopt
