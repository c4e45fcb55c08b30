#include "qkdopt/fock_state.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "qkdopt/errors.hpp"

namespace qkdopt {

namespace {

constexpr double kMaxLeakage = 0.05;

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    return factorial(n) / (factorial(k) * factorial(n - k));
}

}  // namespace

FockState4::FockState4(int trunc) : trunc_(trunc) {
    if (trunc < 1) throw std::invalid_argument("FockState4: trunc must be >= 1");
    amps_.assign(static_cast<std::size_t>(dim()) * dim() * dim() * dim(), {0.0, 0.0});
}

std::size_t FockState4::index(int n_ah, int n_av, int n_bh, int n_bv) const {
    const int d = dim();
    return ((static_cast<std::size_t>(n_ah) * d + n_av) * d + n_bh) * d + n_bv;
}

std::complex<double> FockState4::amp(int n_ah, int n_av, int n_bh, int n_bv) const {
    return amps_[index(n_ah, n_av, n_bh, n_bv)];
}

std::complex<double>& FockState4::amp(int n_ah, int n_av, int n_bh, int n_bv) {
    return amps_[index(n_ah, n_av, n_bh, n_bv)];
}

double FockState4::norm_sq() const {
    double s = 0.0;
    for (const auto& a : amps_) s += std::norm(a);
    return s;
}

double FockState4::renormalize() {
    const double n2 = norm_sq();
    if (n2 <= 0.0) return n2;
    const double inv = 1.0 / std::sqrt(n2);
    for (auto& a : amps_) a *= inv;
    return n2;
}

FockState4 spdc_state(SqueezingParam eps, int trunc) {
    if (trunc < 1) throw std::invalid_argument("spdc_state: trunc must be >= 1");
    if (eps.epsilon < 0.0) throw std::invalid_argument("spdc_state: eps must be >= 0");

    FockState4 state(trunc);
    const double t = std::tanh(eps.epsilon);
    const double sech2 = 1.0 / (std::cosh(eps.epsilon) * std::cosh(eps.epsilon));

    // n H-pairs and m V-pairs; pair correlation forces n_AH=n_BH, n_AV=n_BV.
    for (int n = 0; n <= trunc; ++n) {
        for (int m = 0; m <= trunc; ++m) {
            const double sign = (m % 2 == 0) ? 1.0 : -1.0;
            state.amp(n, m, n, m) = sign * sech2 * std::pow(t, n + m);
        }
    }

    const double kept = state.norm_sq();
    const double leakage = 1.0 - kept;  // exact: the untruncated state has unit norm
    if (leakage > kMaxLeakage) {
        throw TruncationOverflowError(
            leakage, "spdc_state: truncation leakage " + std::to_string(leakage) +
                         " exceeds " + std::to_string(kMaxLeakage) + " at eps=" +
                         std::to_string(eps.epsilon) + ", trunc=" + std::to_string(trunc));
    }
    state.renormalize();
    state.set_leakage(leakage);
    return state;
}

FockState4 rotate_basis(const FockState4& state, Party party, bool inverse) {
    const int T = state.trunc();
    const int d = T + 1;
    // +45: aH' = (aH + aV)/sqrt2, aV' = (aV - aH)/sqrt2. Bob uses -45 so the
    // diagonal-basis outcomes of a pair state stay correlated.
    const bool plus = (party == Party::Alice) != inverse;

    // Two-mode rotation tensor R[(n,m) -> (p,q)], photon number conserving.
    std::vector<double> rot(static_cast<std::size_t>(d) * d * d * d, 0.0);
    auto ridx = [d](int n, int m, int p, int q) {
        return ((static_cast<std::size_t>(n) * d + m) * d + p) * d + q;
    };
    for (int n = 0; n <= T; ++n) {
        for (int m = 0; m <= T; ++m) {
            const double scale = std::pow(2.0, -0.5 * (n + m)) /
                                 std::sqrt(factorial(n) * factorial(m));
            for (int j = 0; j <= n; ++j) {
                for (int k = 0; k <= m; ++k) {
                    const int p = j + k;
                    const int q = (n - j) + (m - k);
                    if (p > T || q > T) continue;  // leakage, handled via norm
                    // +45: (aH+aV)^n (aV-aH)^m, sign (-1)^k on the H picks
                    // from the second factor; -45 mirrors the sign onto V.
                    const int sgn_pow = plus ? k : (n - j);
                    const double sign = (sgn_pow % 2 == 0) ? 1.0 : -1.0;
                    rot[ridx(n, m, p, q)] += sign * binomial(n, j) * binomial(m, k) *
                                             scale * std::sqrt(factorial(p) * factorial(q));
                }
            }
        }
    }

    FockState4 out(T);
    for (int a = 0; a <= T; ++a) {
        for (int b = 0; b <= T; ++b) {
            // (a,b) are the untouched party's modes.
            for (int n = 0; n <= T; ++n) {
                for (int m = 0; m <= T; ++m) {
                    const std::complex<double> in_amp =
                        (party == Party::Alice) ? state.amp(n, m, a, b)
                                                : state.amp(a, b, n, m);
                    if (in_amp == std::complex<double>{}) continue;
                    for (int p = 0; p <= n + m && p <= T; ++p) {
                        const int q = n + m - p;
                        if (q > T) continue;
                        const double r = rot[ridx(n, m, p, q)];
                        if (r == 0.0) continue;
                        if (party == Party::Alice)
                            out.amp(p, q, a, b) += r * in_amp;
                        else
                            out.amp(a, b, p, q) += r * in_amp;
                    }
                }
            }
        }
    }

    const double kept = out.norm_sq();
    out.set_leakage(state.leakage() + std::max(0.0, 1.0 - kept));
    out.renormalize();
    return out;
}

std::vector<double> number_distribution(const FockState4& state) {
    std::vector<double> probs(state.size());
    const auto& amps = state.amps();
    for (std::size_t i = 0; i < amps.size(); ++i) probs[i] = std::norm(amps[i]);
    return probs;
}

}  // namespace qkdopt
