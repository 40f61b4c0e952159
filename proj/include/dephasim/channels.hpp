// channels.hpp — exact dephasing maps in the operator basis.
//
// Collective (one shared environment):
//   c_{i,j} -> c_{i,j} * exp(-eta [sum(i_l - j_l)]^2)
//                      * exp(i dphi [(sum i_l)^2 - (sum j_l)^2])
// Independent (one private environment per qubit, identical spectra):
//   c_{i,j} -> c_{i,j} * exp(-eta sum (i_l - j_l)^2); the phase cancels
//   qubit by qubit since i_l^2 = j_l^2 = 1.

#pragma once

#include <bit>
#include <cmath>
#include <complex>
#include <vector>

#include "dephasim/bath.hpp"
#include "dephasim/detail/bits.hpp"
#include "dephasim/errors.hpp"
#include "dephasim/register.hpp"

namespace dephasim::channels {

enum class ChannelKind { collective, independent };

namespace detail {

inline Complex collective_from_sums(int sum_i, int sum_j,
                                    const bath::DecoherenceFactors& f) {
    const double d = static_cast<double>(sum_i - sum_j);
    const double mag = std::exp(-f.eta() * d * d);
    const double phase = f.delta_phi() * static_cast<double>(sum_i * sum_i - sum_j * sum_j);
    return std::polar(mag, phase);
}

inline Complex independent_from_distance(int hamming, const bath::DecoherenceFactors& f) {
    // each differing qubit contributes (i_l - j_l)^2 = 4
    return {std::exp(-f.eta() * 4.0 * static_cast<double>(hamming)), 0.0};
}

} // namespace detail

inline Complex collective_factor(const Configuration& config_i, const Configuration& config_j,
                                 const bath::DecoherenceFactors& factors) {
    if (config_i.num_qubits() != config_j.num_qubits()) {
        throw ValidationError("configurations must have equal length");
    }
    int sum_i = 0;
    int sum_j = 0;
    for (int v : config_i.labels()) sum_i += v;
    for (int v : config_j.labels()) sum_j += v;
    return detail::collective_from_sums(sum_i, sum_j, factors);
}

inline Complex independent_factor(const Configuration& config_i, const Configuration& config_j,
                                  const bath::DecoherenceFactors& factors) {
    if (config_i.num_qubits() != config_j.num_qubits()) {
        throw ValidationError("configurations must have equal length");
    }
    int hamming = 0;
    for (int l = 1; l <= config_i.num_qubits(); ++l) {
        if (config_i.label(l) != config_j.label(l)) ++hamming;
    }
    return detail::independent_from_distance(hamming, factors);
}

// Applies the map coefficient-wise. Factors depend only on the label sums
// (collective) or the Hamming distance (independent), so they are tabulated
// once and reused across the 4^L entries.
inline OperatorCoefficients apply(const OperatorCoefficients& rho, ChannelKind kind,
                                  const bath::DecoherenceFactors& factors) {
    rho.validate_density();
    const int L = rho.num_qubits();
    const config_index dim = rho.dim();
    OperatorCoefficients out(L);

    if (kind == ChannelKind::collective) {
        // table over (popcount_i, popcount_j); sum = 2 popcount - L
        std::vector<Complex> table(static_cast<std::size_t>((L + 1) * (L + 1)));
        for (int pi = 0; pi <= L; ++pi) {
            for (int pj = 0; pj <= L; ++pj) {
                table[static_cast<std::size_t>(pi * (L + 1) + pj)] =
                    detail::collective_from_sums(2 * pi - L, 2 * pj - L, factors);
            }
        }
        for (config_index i = 0; i < dim; ++i) {
            const int pi = std::popcount(i);
            for (config_index j = 0; j < dim; ++j) {
                const auto flat = dephasim::detail::pair_index(i, j);
                out.data()[flat] = rho.data()[flat] *
                                   table[static_cast<std::size_t>(pi * (L + 1) + std::popcount(j))];
            }
        }
        return out;
    }

    std::vector<Complex> table(static_cast<std::size_t>(L + 1));
    for (int h = 0; h <= L; ++h) {
        table[static_cast<std::size_t>(h)] = detail::independent_from_distance(h, factors);
    }
    for (config_index i = 0; i < dim; ++i) {
        for (config_index j = 0; j < dim; ++j) {
            const auto flat = dephasim::detail::pair_index(i, j);
            out.data()[flat] = rho.data()[flat] *
                               table[static_cast<std::size_t>(std::popcount(i ^ j))];
        }
    }
    return out;
}

} // namespace dephasim::channels
