#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "qkdopt/errors.hpp"
#include "qkdopt/fock_state.hpp"

using namespace qkdopt;

namespace {

double sech(double x) { return 1.0 / std::cosh(x); }

}  // namespace

TEST_CASE("vacuum state for eps = 0") {
    const auto state = spdc_state({0.0}, 3);
    CHECK(std::abs(state.amp(0, 0, 0, 0)) == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t i = 1; i < state.size(); ++i)
        CHECK(std::norm(state.amps()[i]) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(state.leakage() == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("first-order pair amplitudes at eps = 0.2") {
    const double eps = 0.2;
    const auto state = spdc_state({eps}, 3);
    // Pre-renormalization coefficients from the two-squeezer expansion.
    const double expected = sech(eps) * sech(eps) * std::tanh(eps);
    const double renorm = std::sqrt(1.0 - state.leakage());

    CHECK(state.amp(1, 0, 1, 0).real() * renorm == doctest::Approx(expected).epsilon(1e-10));
    CHECK(state.amp(0, 1, 0, 1).real() * renorm == doctest::Approx(-expected).epsilon(1e-10));
    CHECK(expected == doctest::Approx(0.1898).epsilon(1e-3));
}

TEST_CASE("pair correlation: uncorrelated amplitudes are exactly zero") {
    const auto state = spdc_state({0.2}, 3);
    for (int nah = 0; nah <= 3; ++nah)
        for (int nav = 0; nav <= 3; ++nav)
            for (int nbh = 0; nbh <= 3; ++nbh)
                for (int nbv = 0; nbv <= 3; ++nbv)
                    if (nah != nbh || nav != nbv)
                        CHECK(state.amp(nah, nav, nbh, nbv) == std::complex<double>{});
    CHECK(state.amp(1, 0, 0, 1) == std::complex<double>{});
}

TEST_CASE("normalization and Alice/Bob exchange symmetry") {
    for (double eps : {0.05, 0.1, 0.3}) {
        const auto state = spdc_state({eps}, 3);
        CHECK(state.norm_sq() == doctest::Approx(1.0).epsilon(1e-12));
        for (int nah = 0; nah <= 3; ++nah)
            for (int nav = 0; nav <= 3; ++nav)
                for (int nbh = 0; nbh <= 3; ++nbh)
                    for (int nbv = 0; nbv <= 3; ++nbv)
                        CHECK(state.amp(nah, nav, nbh, nbv) ==
                              state.amp(nbh, nbv, nah, nav));
    }
}

TEST_CASE("truncation convergence: boundary mass below 1e-3 for eps <= 0.3") {
    for (double eps : {0.1, 0.2, 0.3}) {
        const auto state = spdc_state({eps}, 4);
        const auto probs = number_distribution(state);
        double boundary = 0.0;
        for (int nah = 0; nah <= 4; ++nah)
            for (int nav = 0; nav <= 4; ++nav)
                for (int nbh = 0; nbh <= 4; ++nbh)
                    for (int nbv = 0; nbv <= 4; ++nbv)
                        if (nah == 4 || nav == 4 || nbh == 4 || nbv == 4)
                            boundary += probs[state.index(nah, nav, nbh, nbv)];
        CHECK(boundary < 1e-3);
    }
}

TEST_CASE("argument and overflow errors") {
    CHECK_THROWS_AS(spdc_state({0.1}, 0), std::invalid_argument);
    CHECK_THROWS_AS(spdc_state({-0.1}, 3), std::invalid_argument);
    CHECK_THROWS_AS(spdc_state({1.5}, 3), TruncationOverflowError);
    try {
        spdc_state({1.5}, 3);
    } catch (const TruncationOverflowError& e) {
        CHECK(e.leakage() > 0.05);
        CHECK(std::string(e.what()).find("leakage") != std::string::npos);
    }
}

TEST_CASE("rotation is an involution with the inverse flag") {
    // Support kept at total photons per party <= trunc, so the rotation
    // is exactly unitary and forward-then-inverse must restore the state.
    FockState4 state(3);
    state.amp(1, 0, 1, 0) = 0.6;
    state.amp(0, 1, 0, 1) = -0.6;
    state.amp(1, 1, 1, 1) = 0.5;
    state.amp(0, 0, 0, 0) = std::sqrt(1.0 - 0.36 - 0.36 - 0.25);
    for (Party p : {Party::Alice, Party::Bob}) {
        const auto back = rotate_basis(rotate_basis(state, p), p, true);
        for (std::size_t i = 0; i < state.size(); ++i)
            CHECK(std::abs(back.amps()[i] - state.amps()[i]) < 1e-10);
    }
    // On a truncated SPDC state the identity holds up to boundary leakage.
    const auto spdc = spdc_state({0.2}, 3);
    const auto back = rotate_basis(rotate_basis(spdc, Party::Alice), Party::Alice, true);
    for (std::size_t i = 0; i < spdc.size(); ++i)
        CHECK(std::abs(back.amps()[i] - spdc.amps()[i]) < 1e-2);
}

TEST_CASE("rotating the vacuum is a no-op") {
    const auto vac = spdc_state({0.0}, 3);
    const auto rot = rotate_basis(vac, Party::Alice);
    CHECK(std::abs(rot.amp(0, 0, 0, 0)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("single H pair splits evenly on Alice under rotation") {
    FockState4 state(3);
    state.amp(1, 0, 1, 0) = 1.0;
    const auto rot = rotate_basis(state, Party::Alice);

    const double p_h = std::norm(rot.amp(1, 0, 1, 0));
    const double p_v = std::norm(rot.amp(0, 1, 1, 0));
    CHECK(p_h == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(p_v == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(p_h + p_v == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(rot.norm_sq() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("number distribution: Born probabilities") {
    const auto vac = spdc_state({0.0}, 3);
    auto probs = number_distribution(vac);
    CHECK(probs[vac.index(0, 0, 0, 0)] == doctest::Approx(1.0).epsilon(1e-12));

    const double eps = 0.2;
    const auto state = spdc_state({eps}, 3);
    probs = number_distribution(state);
    const double ratio =
        probs[state.index(1, 0, 1, 0)] / probs[state.index(0, 0, 0, 0)];
    CHECK(ratio == doctest::Approx(std::tanh(eps) * std::tanh(eps)).epsilon(1e-10));
    CHECK(ratio == doctest::Approx(0.03946).epsilon(1e-3));

    double sum = 0.0;
    for (double p : probs) {
        CHECK(p >= 0.0);
        sum += p;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("rotation preserves norm for a range of states") {
    for (double eps : {0.05, 0.15, 0.25}) {
        const auto state = spdc_state({eps}, 3);
        const auto rot = rotate_basis(state, Party::Bob);
        CHECK(rot.norm_sq() == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(rot.leakage() < 1e-2);
    }
}
