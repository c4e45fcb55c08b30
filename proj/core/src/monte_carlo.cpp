#include "qkdopt/monte_carlo.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

namespace qkdopt {

namespace {

// Cumulative distribution over number outcomes for one measured state.
std::vector<double> cdf_of(const FockState4& state) {
    auto probs = number_distribution(state);
    double acc = 0.0;
    for (auto& p : probs) {
        acc += p;
        p = acc;
    }
    return probs;
}

std::array<int, 4> draw_numbers(const std::vector<double>& cdf, int dim, double u) {
    std::size_t lo = 0, hi = cdf.size() - 1;
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (cdf[mid] < u)
            lo = mid + 1;
        else
            hi = mid;
    }
    const int nbv = static_cast<int>(lo % dim);
    const int nbh = static_cast<int>((lo / dim) % dim);
    const int nav = static_cast<int>((lo / dim / dim) % dim);
    const int nah = static_cast<int>(lo / dim / dim / dim);
    return {nah, nav, nbh, nbv};
}

// One bucket detector: any thinned photon or any dark count clicks it.
bool detector_clicks(int photons, double eta, double dark_mean, std::mt19937_64& rng) {
    if (photons > 0) {
        std::binomial_distribution<int> thin(photons, eta);
        if (thin(rng) > 0) return true;
    }
    if (dark_mean > 0.0) {
        std::poisson_distribution<int> darks(dark_mean);
        if (darks(rng) > 0) return true;
    }
    return false;
}

// -1 = no click, 0 = H bit, 1 = V bit (doubles coin-flipped).
int party_bit(bool click_h, bool click_v, std::mt19937_64& rng) {
    if (click_h && click_v) return std::bernoulli_distribution(0.5)(rng) ? 1 : 0;
    if (click_h) return 0;
    if (click_v) return 1;
    return -1;
}

}  // namespace

McEstimate mc_metrics(const FockState4& state, const LinkParams& link, long samples,
                      std::uint64_t seed) {
    link.validate();
    if (samples <= 0) throw std::invalid_argument("mc_metrics: samples must be > 0");

    const int dim = state.trunc() + 1;
    const auto cdf_z = cdf_of(state);
    const auto cdf_x = cdf_of(rotate_basis(rotate_basis(state, Party::Alice), Party::Bob));

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    long coincidences = 0;
    long z_coincidences = 0;
    long z_errors = 0;

    for (long s = 0; s < samples; ++s) {
        const bool z_basis = std::bernoulli_distribution(0.5)(rng);
        const auto& cdf = z_basis ? cdf_z : cdf_x;
        const auto n = draw_numbers(cdf, dim, unit(rng));

        const bool a_h = detector_clicks(n[0], link.eta_a, link.d_a, rng);
        const bool a_v = detector_clicks(n[1], link.eta_a, link.d_a, rng);
        const bool b_h = detector_clicks(n[2], link.eta_b, link.d_b, rng);
        const bool b_v = detector_clicks(n[3], link.eta_b, link.d_b, rng);

        const int bit_a = party_bit(a_h, a_v, rng);
        const int bit_b = party_bit(b_h, b_v, rng);
        if (bit_a < 0 || bit_b < 0) continue;

        ++coincidences;
        if (z_basis) {
            ++z_coincidences;
            if (bit_a != bit_b) ++z_errors;
        }
    }

    McEstimate est;
    est.samples = samples;
    est.coincidences = coincidences;
    est.z_coincidences = z_coincidences;
    est.q = static_cast<double>(coincidences) / samples;
    est.q_se = std::sqrt(est.q * (1.0 - est.q) / samples);
    if (z_coincidences > 0) {
        est.delta1 = static_cast<double>(z_errors) / z_coincidences;
        est.delta1_se = std::sqrt(est.delta1 * (1.0 - est.delta1) / z_coincidences);
    }
    return est;
}

}  // namespace qkdopt
