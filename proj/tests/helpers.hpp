// helpers.hpp — shared generators for the unit suites

#pragma once

#include <catch2/catch_amalgamated.hpp>

#include <complex>
#include <random>
#include <vector>

#include "dephasim/dephasim.hpp"

namespace testutil {

using dephasim::Complex;
using dephasim::config_index;
using dephasim::OperatorCoefficients;
using dephasim::PureState;

inline Complex random_amplitude(std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    return {n(rng), n(rng)};
}

inline PureState random_state(std::mt19937_64& rng, int num_qubits) {
    const config_index dim = 1ULL << num_qubits;
    std::vector<PureState::Term> terms;
    terms.reserve(dim);
    double norm2 = 0.0;
    for (config_index c = 0; c < dim; ++c) {
        Complex a = random_amplitude(rng);
        norm2 += std::norm(a);
        terms.push_back({c, a});
    }
    double norm = std::sqrt(norm2);
    for (auto& t : terms) t.amplitude /= norm;
    return PureState(num_qubits, std::move(terms));
}

// Random state supported on the sector A_m.
inline PureState random_sector_state(std::mt19937_64& rng, int num_qubits, int m) {
    auto configs = dephasim::dfs::sector_configurations(num_qubits, m);
    REQUIRE_FALSE(configs.empty());
    std::vector<PureState::Term> terms;
    double norm2 = 0.0;
    for (config_index c : configs) {
        Complex a = random_amplitude(rng);
        norm2 += std::norm(a);
        terms.push_back({c, a});
    }
    double norm = std::sqrt(norm2);
    for (auto& t : terms) t.amplitude /= norm;
    return PureState(num_qubits, std::move(terms));
}

// Random mixed density as a convex mixture of random pure states.
inline OperatorCoefficients random_density(std::mt19937_64& rng, int num_qubits,
                                           int num_components = 3) {
    std::uniform_real_distribution<double> u(0.1, 1.0);
    std::vector<double> weights;
    double total = 0.0;
    for (int k = 0; k < num_components; ++k) {
        weights.push_back(u(rng));
        total += weights.back();
    }
    OperatorCoefficients rho(num_qubits);
    for (int k = 0; k < num_components; ++k) {
        OperatorCoefficients part = dephasim::from_pure_state(random_state(rng, num_qubits));
        const double w = weights[static_cast<std::size_t>(k)] / total;
        for (std::size_t i = 0; i < rho.data().size(); ++i) {
            rho.data()[i] += w * part.data()[i];
        }
    }
    return rho;
}

inline double max_abs_difference(const OperatorCoefficients& a, const OperatorCoefficients& b) {
    REQUIRE(a.num_qubits() == b.num_qubits());
    double worst = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i) {
        worst = std::max(worst, std::abs(a.data()[i] - b.data()[i]));
    }
    return worst;
}

} // namespace testutil
