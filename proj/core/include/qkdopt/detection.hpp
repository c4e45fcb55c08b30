#pragma once

#include <array>

#include "qkdopt/fock_state.hpp"

namespace qkdopt {

/// One bucket detector: quantum efficiency plus Poisson mean dark counts
/// per coincidence window.
struct DetectorSpec {
    double efficiency = 1.0;
    double dark_prob = 0.0;
};

/// Symmetric link description. eta_a/eta_b are the end-to-end arm
/// efficiencies (channel transmission multiplied into detector quantum
/// efficiency); d_a/d_b are per-detector Poisson dark means per window,
/// the same for both detectors of a party.
struct LinkParams {
    double eta_a = 1.0;
    double eta_b = 1.0;
    double d_a = 0.0;
    double d_b = 0.0;
    double window = 1.0e-9;  // seconds

    void validate() const;
};

/// One party's outcome in one basis. p_h and p_v already contain the
/// random half of the double-click mass each, so p_h + p_v + p_none = 1;
/// p_double keeps the raw both-click probability for diagnostics.
struct PartyOutcome {
    double p_h = 0.0;
    double p_v = 0.0;
    double p_double = 0.0;
    double p_none = 1.0;
};

enum class Basis { Z, X };

/// Outcome labels for the joint table. Double-click mass has been
/// randomized into H/V, so the Double row and column are zero; the slot
/// is kept so table indices match the per-party outcome set.
enum class Click { H = 0, V = 1, Double = 2, None = 3 };

struct OutcomeTable {
    std::array<std::array<double, 4>, 4> p{};  // [alice][bob]

    double& at(Click a, Click b) { return p[static_cast<int>(a)][static_cast<int>(b)]; }
    double at(Click a, Click b) const { return p[static_cast<int>(a)][static_cast<int>(b)]; }

    /// Probability both parties registered a bit (H or V).
    double coincidence() const;
    /// Probability the two bits disagree (H/V or V/H).
    double mismatch() const;
};

/// P(k counts | i incident photons) for a photon-counting detector with
/// Poissonian dark counts: sum over d darks of D(n,d) * Binom(i, k-d).
double p_count(int k, int i, const DetectorSpec& det);

/// Bucket-detector click probability, 1 - P(0|i) = 1 - e^{-n}(1-eta)^i.
double p_click(int i, const DetectorSpec& det);

/// Double clicks are assigned a random bit: half of P(c|H)P(c|V) goes to
/// each of p_h and p_v.
PartyOutcome party_outcome(double p_click_h, double p_click_v);

/// Click-outcome distribution for one matched-basis window. X-basis
/// parties are rotated before readout; per photon-number outcome the two
/// parties' detectors are conditionally independent. Entries sum to 1.
OutcomeTable joint_click_distribution(const FockState4& state, Basis basis_a,
                                      Basis basis_b, const LinkParams& link);

}  // namespace qkdopt
