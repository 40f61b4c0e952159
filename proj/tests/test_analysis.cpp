#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "dephasim/analysis.hpp"
#include "helpers.hpp"

using namespace dephasim;
using namespace dephasim::analysis;
using channels::ChannelKind;
using Catch::Approx;

namespace {

bath::DecoherenceFactors factors(double eta, double dphi) {
    return bath::DecoherenceFactors(1.0, eta, dphi);
}

bath::BathSpec ohmic_hard(double eps, double wc, double T) {
    return {bath::OhmicSpectrum{eps, wc, bath::Cutoff::hard}, T};
}

} // namespace

TEST_CASE("fidelity basics", "[analysis]") {
    std::mt19937_64 rng(11);
    PureState psi = testutil::random_state(rng, 2);
    OperatorCoefficients rho = from_pure_state(psi);
    CHECK(fidelity(rho, rho) == Approx(1.0).margin(1e-12));

    OperatorCoefficients up = from_pure_state(PureState::basis_state(Configuration({1})));
    OperatorCoefficients down = from_pure_state(PureState::basis_state(Configuration({-1})));
    CHECK(fidelity(up, down) == 0.0);

    // superposition through the independent channel at eta = 0.5:
    // F = 1/2 + 1/2 e^-2
    OperatorCoefficients sup = from_pure_state(PureState::uniform_superposition(1));
    OperatorCoefficients evolved = channels::apply(sup, ChannelKind::independent, factors(0.5, 0.0));
    CHECK(fidelity(sup, evolved) == Approx(0.56766764161830634595).margin(1e-12));

    CHECK_THROWS_AS(fidelity(up, from_pure_state(PureState::ghz(2))), ValidationError);
}

TEST_CASE("fidelity guards against non-density operands", "[analysis]") {
    OperatorCoefficients junk(1);
    junk.set_coeff(0, 1, Complex(1.0, 0.0));
    OperatorCoefficients mixed(1);
    mixed.set_coeff(0, 0, Complex(0.5, 0.0));
    mixed.set_coeff(1, 1, Complex(0.5, 0.0));
    mixed.set_coeff(0, 1, Complex(0.0, 0.4));
    mixed.set_coeff(1, 0, Complex(0.0, 0.4)); // deliberately not Hermitian
    CHECK_THROWS_AS(fidelity(junk, mixed), NumericalError);
}

TEST_CASE("collective closed form", "[analysis]") {
    // coherence-preserving states keep F = 1 for any factors
    std::mt19937_64 rng(21);
    for (int m : {-2, 0, 2}) {
        PureState psi = testutil::random_sector_state(rng, 4, m);
        CHECK(fidelity_collective_closed_form(psi, factors(3.5, 5.0)) ==
              Approx(1.0).margin(1e-12));
    }

    // GHZ: F = 1/2 + 1/2 exp(-4 L^2 eta), independent of delta_phi
    for (int L : {1, 2, 3, 5, 8}) {
        PureState ghz = PureState::ghz(L);
        for (double eta : {0.01, 0.1, 1.0}) {
            double expected = 0.5 + 0.5 * std::exp(-4.0 * L * L * eta);
            CHECK(fidelity_collective_closed_form(ghz, factors(eta, 1.7)) ==
                  Approx(expected).margin(1e-12));
        }
    }

    // single-qubit superposition at eta = 0.25: 1/2 + 1/2 e^-1
    CHECK(fidelity_collective_closed_form(PureState::uniform_superposition(1),
                                          factors(0.25, 0.0)) ==
          Approx(0.6839397205857211608).margin(1e-12));

    // sparse support keeps large registers closed-form computable
    CHECK(fidelity_collective_closed_form(PureState::ghz(64), factors(0.001, 0.2)) ==
          Approx(0.5 + 0.5 * std::exp(-4.0 * 64.0 * 64.0 * 0.001)).margin(1e-12));
}

TEST_CASE("independent closed form", "[analysis]") {
    PureState basis = PureState::basis_state(Configuration({1, -1, 1}));
    CHECK(fidelity_independent_closed_form(basis, factors(2.0, 0.3)) == 1.0);

    for (int L : {1, 2, 3, 5, 8}) {
        PureState ghz = PureState::ghz(L);
        for (double eta : {0.01, 0.1, 1.0}) {
            double expected = 0.5 + 0.5 * std::exp(-4.0 * L * eta);
            CHECK(fidelity_independent_closed_form(ghz, factors(eta, 0.9)) ==
                  Approx(expected).margin(1e-12));
        }
    }
}

TEST_CASE("sector-weight evaluation equals the literal pair sum", "[analysis]") {
    // brute-force restatement of the collective law as a support double sum
    auto pair_sum = [](const PureState& psi, const bath::DecoherenceFactors& f) {
        Complex total(0.0, 0.0);
        for (const auto& ti : psi.terms()) {
            for (const auto& tj : psi.terms()) {
                int si = dephasim::detail::label_sum(ti.index, psi.num_qubits());
                int sj = dephasim::detail::label_sum(tj.index, psi.num_qubits());
                total += std::norm(ti.amplitude) * std::norm(tj.amplitude) *
                         channels::detail::collective_from_sums(si, sj, f);
            }
        }
        return total.real();
    };
    std::mt19937_64 rng(61803);
    for (int rep = 0; rep < 20; ++rep) {
        const int L = 1 + static_cast<int>(rng() % 6);
        PureState psi = testutil::random_state(rng, L);
        auto f = factors(0.3, 1.9);
        CHECK(fidelity_collective_closed_form(psi, f) ==
              Approx(pair_sum(psi, f)).margin(1e-12));
    }
}

TEST_CASE("closed forms agree with the dense channel path", "[analysis]") {
    std::mt19937_64 rng(5150);
    for (int rep = 0; rep < 50; ++rep) {
        const int L = 1 + static_cast<int>(rng() % 4);
        PureState psi = testutil::random_state(rng, L);
        OperatorCoefficients rho = from_pure_state(psi);
        double x = testutil::random_amplitude(rng).real();
        auto f = factors(0.05 + 0.4 * x * x, 1.1);
        double dense_c = fidelity(rho, channels::apply(rho, ChannelKind::collective, f));
        double dense_i = fidelity(rho, channels::apply(rho, ChannelKind::independent, f));
        CHECK(fidelity_collective_closed_form(psi, f) == Approx(dense_c).margin(1e-10));
        CHECK(fidelity_independent_closed_form(psi, f) == Approx(dense_i).margin(1e-10));
    }
}

TEST_CASE("closed forms are nonincreasing in eta and stay in [0, 1]", "[analysis]") {
    std::mt19937_64 rng(33);
    PureState psi = testutil::random_state(rng, 3);
    // the independent form is a sum of positive terms, monotone for any
    // delta_phi; the collective form is monotone when the phase factor is
    // trivial (a nonzero delta_phi lets negative cosine terms shrink with
    // eta and raise the total)
    double prev_c = 1.0;
    double prev_i = 1.0;
    for (double eta : {0.0, 0.05, 0.2, 0.8, 2.0, 6.0}) {
        double fc = fidelity_collective_closed_form(psi, factors(eta, 0.0));
        double fi = fidelity_independent_closed_form(psi, factors(eta, 0.4));
        CHECK(fc <= prev_c + 1e-12);
        CHECK(fi <= prev_i + 1e-12);
        CHECK((fc >= 0.0 && fc <= 1.0));
        CHECK((fi >= 0.0 && fi <= 1.0));
        prev_c = fc;
        prev_i = fi;
    }

    // L = 1: collective and independent closed forms coincide
    PureState one = testutil::random_state(rng, 1);
    for (double eta : {0.1, 0.7}) {
        CHECK(fidelity_collective_closed_form(one, factors(eta, 2.2)) ==
              Approx(fidelity_independent_closed_form(one, factors(eta, 2.2))).margin(1e-14));
    }
}

TEST_CASE("purity", "[analysis]") {
    std::mt19937_64 rng(77);
    PureState psi = testutil::random_state(rng, 3);
    CHECK(purity(from_pure_state(psi)) == Approx(1.0).margin(1e-12));

    for (int L : {1, 2, 3}) {
        Eigen::Index d = 1LL << L;
        OperatorCoefficients mixed =
            from_matrix(Eigen::MatrixXcd::Identity(d, d) / static_cast<double>(d));
        CHECK(purity(mixed) == Approx(std::pow(2.0, -L)).margin(1e-14));
    }

    // superposition after eta = 0.5 independent dephasing: 1/2 + 1/2 e^-4
    OperatorCoefficients sup = from_pure_state(PureState::uniform_superposition(1));
    OperatorCoefficients evolved = channels::apply(sup, ChannelKind::independent, factors(0.5, 0.0));
    CHECK(purity(evolved) == Approx(0.50915781944436709015).margin(1e-12));

    // support-sum purity equals the dense route
    std::mt19937_64 rng2(78);
    for (int rep = 0; rep < 20; ++rep) {
        const int L = 1 + static_cast<int>(rng2() % 4);
        PureState state = testutil::random_state(rng2, L);
        auto f = factors(0.3, 0.8);
        for (ChannelKind kind : {ChannelKind::collective, ChannelKind::independent}) {
            double dense = purity(channels::apply(from_pure_state(state), kind, f));
            CHECK(purity_after_dephasing(state, kind, f) == Approx(dense).margin(1e-10));
        }
    }
}

TEST_CASE("decoherence time", "[analysis]") {
    // eps = 1, wc = 1, T = 10: the eta = 1 crossing sits at t* = 0.31662...
    // (40-digit quadrature + root-finding reference), well below 1/wc, so the
    // high-temperature estimate 1/(pi eps^2 T) does not apply yet
    bath::BathSpec hot = ohmic_hard(1, 1, 10);
    double t_star = decoherence_time(hot);
    CHECK(t_star == Approx(0.31662423940623).epsilon(1e-5));
    CHECK(bath::eta(hot, t_star) == Approx(1.0).margin(1e-6));

    // T = 0 root exists for strong coupling: reference 2.21301628547055
    CHECK(decoherence_time(ohmic_hard(1, 1, 0)) == Approx(2.21301628547055).epsilon(1e-5));

    // doubling T halves t* where the crossing is in the linear regime
    // (t* >> 1/wc and pi eps^2 T << wc); references from 30-digit quadrature
    double t10 = decoherence_time(ohmic_hard(0.1, 10, 10));
    double t20 = decoherence_time(ohmic_hard(0.1, 10, 20));
    CHECK(t10 == Approx(3.24321783977795).epsilon(1e-5));
    CHECK(t20 == Approx(1.65141486178066).epsilon(1e-5));
    CHECK(t20 / t10 == Approx(0.5).epsilon(0.15));
    double t1 = decoherence_time(ohmic_hard(0.1, 10, 1));
    CHECK(t1 == Approx(31.500088121311).epsilon(1e-5));
    CHECK(decoherence_time(ohmic_hard(0.1, 10, 2)) / t1 == Approx(0.5).epsilon(0.15));

    // weak coupling at T = 0 never crosses eta = 1 inside the search window
    CHECK_THROWS_AS(decoherence_time(ohmic_hard(0.1, 1, 0)), NumericalError);
    CHECK_THROWS_AS(decoherence_time(bath::BathSpec{bath::DiscreteSpectrum{{{1.0, 1.0}}}, 1.0}),
                    UnsupportedModelError);
}

TEST_CASE("fidelity curve invariants", "[analysis]") {
    FidelityCurve curve{{0.0, 1.0, 2.0}, {1.0, 0.8, 0.6}};
    CHECK_NOTHROW(curve.validate());
    FidelityCurve bad_order{{0.0, 0.0}, {1.0, 1.0}};
    CHECK_THROWS_AS(bad_order.validate(), ValidationError);
    FidelityCurve bad_value{{0.0, 1.0}, {1.0, 1.5}};
    CHECK_THROWS_AS(bad_value.validate(), ValidationError);
    FidelityCurve bad_len{{0.0}, {1.0, 0.5}};
    CHECK_THROWS_AS(bad_len.validate(), ValidationError);
}
