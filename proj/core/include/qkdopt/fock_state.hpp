#pragma once

#include <complex>
#include <vector>

namespace qkdopt {

enum class Party { Alice, Bob };

/// SPDC pump-strength parameter. epsilon = 0 is the unpumped vacuum.
struct SqueezingParam {
    double epsilon = 0.0;
};

/// Four-mode photon-number state over (Alice-H, Alice-V, Bob-H, Bob-V),
/// stored dense over (trunc+1)^4 complex amplitudes.
///
/// States are renormalized inside the truncated space; the probability
/// lost at the truncation boundary by the operation that produced the
/// state is kept in leakage() rather than silently dropped.
class FockState4 {
public:
    explicit FockState4(int trunc);

    int trunc() const { return trunc_; }
    int dim() const { return trunc_ + 1; }
    std::size_t size() const { return amps_.size(); }

    std::size_t index(int n_ah, int n_av, int n_bh, int n_bv) const;

    std::complex<double> amp(int n_ah, int n_av, int n_bh, int n_bv) const;
    std::complex<double>& amp(int n_ah, int n_av, int n_bh, int n_bv);

    const std::vector<std::complex<double>>& amps() const { return amps_; }
    std::vector<std::complex<double>>& amps() { return amps_; }

    /// Probability mass lost to truncation when this state was produced.
    double leakage() const { return leakage_; }
    void set_leakage(double leakage) { leakage_ = leakage; }

    /// Sum of |amp|^2 over the stored table.
    double norm_sq() const;

    /// Scales amplitudes to unit norm. Returns the pre-normalization norm
    /// squared (zero-norm states are left untouched).
    double renormalize();

private:
    int trunc_;
    double leakage_ = 0.0;
    std::vector<std::complex<double>> amps_;
};

/// Polarization-entangled state from two SPDC squeezers, one feeding the
/// (A_H, B_H) mode pair and one feeding (A_V, B_V) with a (-1)^m sign on
/// the m-pair V term. Amplitudes before renormalization follow
/// sech^2(eps) * tanh(eps)^(n+m). Renormalized within the truncated
/// space; the truncation leakage is recorded on the returned state.
///
/// Throws std::invalid_argument for trunc < 1 or eps < 0, and
/// TruncationOverflowError when leakage exceeds 5%.
FockState4 spdc_state(SqueezingParam eps, int trunc);

/// 45-degree polarization rotation of one party's H/V mode pair.
///
/// Sign convention: Alice rotates by +45 degrees, Bob by -45, so that a
/// rotated pair state stays bit-correlated in the diagonal basis.
/// `inverse` flips the angle, making rotate(p) then rotate(p, true) the
/// identity. Photon-number-conserving within each party, but components
/// pushed past the per-mode truncation are dropped, recorded as leakage,
/// and the state renormalized.
FockState4 rotate_basis(const FockState4& state, Party party, bool inverse = false);

/// Born-rule probabilities |amp|^2, indexed like the amplitude table.
/// Sums to 1 for a normalized input.
std::vector<double> number_distribution(const FockState4& state);

}  // namespace qkdopt
