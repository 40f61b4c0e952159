// analysis.hpp — fidelity, purity, closed-form decay laws, decoherence time.

#pragma once

#include <algorithm>
#include <bit>
#include <map>
#include <cmath>
#include <complex>
#include <sstream>
#include <vector>

#include "dephasim/bath.hpp"
#include "dephasim/channels.hpp"
#include "dephasim/detail/bits.hpp"
#include "dephasim/detail/summation.hpp"
#include "dephasim/errors.hpp"
#include "dephasim/register.hpp"

namespace dephasim::analysis {

inline constexpr double kImagTol = 1e-10;

struct FidelityCurve {
    std::vector<double> times;
    std::vector<double> values;

    void validate() const {
        if (times.size() != values.size()) {
            throw ValidationError("fidelity curve: times and values differ in length");
        }
        for (std::size_t k = 0; k < times.size(); ++k) {
            if (!(times[k] >= 0.0)) throw ValidationError("fidelity curve: negative time");
            if (k > 0 && !(times[k] > times[k - 1])) {
                throw ValidationError("fidelity curve: times must be strictly increasing");
            }
            if (!(values[k] >= 0.0 && values[k] <= 1.0 + 1e-10)) {
                throw ValidationError("fidelity curve: value outside [0, 1]");
            }
        }
    }
};

namespace detail {

// A residual imaginary part above tolerance signals a bug in the caller's
// operands, not noise; refuse to clamp it away.
inline double real_checked(Complex z, const char* what) {
    if (std::abs(z.imag()) > kImagTol) {
        std::ostringstream msg;
        msg << what << " has imaginary residue " << z.imag() << " beyond " << kImagTol;
        throw NumericalError(msg.str());
    }
    return z.real();
}

inline double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

} // namespace detail

// tr[rho0 rhot] through the basis trace pairings: tr(rho_{i,j} rho_{k,l}) is
// 1 exactly when (k,l) = (j,i), else 0, so the trace is sum a_{i,j} b_{j,i}.
inline double fidelity(const OperatorCoefficients& rho0, const OperatorCoefficients& rhot) {
    if (rho0.num_qubits() != rhot.num_qubits()) {
        throw ValidationError("fidelity requires operators of equal size");
    }
    const config_index dim = rho0.dim();
    dephasim::detail::ComplexSum sum;
    for (config_index i = 0; i < dim; ++i) {
        for (config_index j = 0; j < dim; ++j) {
            sum.add(rho0.coeff(i, j) * rhot.coeff(j, i));
        }
    }
    return detail::clamp01(detail::real_checked(sum.value(), "fidelity"));
}

// tr(rho^2), in (0, 1]; rounding overshoot above 1 is trimmed.
inline double purity(const OperatorCoefficients& rho) {
    const config_index dim = rho.dim();
    dephasim::detail::ComplexSum sum;
    for (config_index i = 0; i < dim; ++i) {
        for (config_index j = 0; j < dim; ++j) {
            sum.add(rho.coeff(i, j) * rho.coeff(j, i));
        }
    }
    return std::min(detail::real_checked(sum.value(), "purity"), 1.0);
}

namespace detail {

// The collective factors depend on configurations only through their label
// sums, so the support double sum collapses onto sector weights
// W_m = sum_{i in A_m} |c_i|^2.
inline std::map<int, double> sector_weights(const PureState& psi) {
    std::map<int, double> weights;
    for (const PureState::Term& t : psi.terms()) {
        weights[dephasim::detail::label_sum(t.index, psi.num_qubits())] +=
            std::norm(t.amplitude);
    }
    return weights;
}

} // namespace detail

// F = sum |c_i|^2 |c_j|^2 exp(-eta [sum(i-j)]^2) exp(i dphi [(sum i)^2 - (sum j)^2])
// over the state's support, evaluated as the equivalent sector-weight sum;
// the imaginary part cancels pairwise and is checked, then discarded.
inline double fidelity_collective_closed_form(const PureState& psi,
                                              const bath::DecoherenceFactors& factors) {
    std::map<int, double> weights = detail::sector_weights(psi);
    dephasim::detail::ComplexSum sum;
    for (const auto& [si, wi] : weights) {
        for (const auto& [sj, wj] : weights) {
            sum.add(wi * wj * channels::detail::collective_from_sums(si, sj, factors));
        }
    }
    return detail::clamp01(detail::real_checked(sum.value(), "collective fidelity"));
}

// F' = sum |c_i|^2 |c_j|^2 exp(-eta sum (i-j)^2); independent of delta_phi.
inline double fidelity_independent_closed_form(const PureState& psi,
                                               const bath::DecoherenceFactors& factors) {
    dephasim::detail::NeumaierSum sum;
    for (const PureState::Term& ti : psi.terms()) {
        const double pi_ = std::norm(ti.amplitude);
        for (const PureState::Term& tj : psi.terms()) {
            sum.add(pi_ * std::norm(tj.amplitude) *
                    channels::detail::independent_from_distance(
                        std::popcount(ti.index ^ tj.index), factors)
                        .real());
        }
    }
    return detail::clamp01(sum.value());
}

// tr(rho_t^2) for a pure input sent through a dephasing channel:
// sum |c_i|^2 |c_j|^2 |f_ij|^2 over the support (sector weights in the
// collective case). Lets sweeps report purity without materializing the
// 4^L tensor.
inline double purity_after_dephasing(const PureState& psi, channels::ChannelKind kind,
                                     const bath::DecoherenceFactors& factors) {
    dephasim::detail::NeumaierSum sum;
    if (kind == channels::ChannelKind::collective) {
        std::map<int, double> weights = detail::sector_weights(psi);
        for (const auto& [si, wi] : weights) {
            for (const auto& [sj, wj] : weights) {
                sum.add(wi * wj *
                        std::norm(channels::detail::collective_from_sums(si, sj, factors)));
            }
        }
        return std::min(sum.value(), 1.0);
    }
    for (const PureState::Term& ti : psi.terms()) {
        const double pi_ = std::norm(ti.amplitude);
        for (const PureState::Term& tj : psi.terms()) {
            sum.add(pi_ * std::norm(tj.amplitude) *
                    std::norm(channels::detail::independent_from_distance(
                        std::popcount(ti.index ^ tj.index), factors)));
        }
    }
    return std::min(sum.value(), 1.0);
}

// Time of the eta(t) = 1 crossing, by bracketing + bisection. In the
// high-temperature regime this reduces to 1/(pi eps^2 T).
inline double decoherence_time(const bath::BathSpec& b) {
    bath::validate(b);
    const auto* s = std::get_if<bath::OhmicSpectrum>(&b.spectral);
    if (s == nullptr) {
        throw UnsupportedModelError("decoherence time is defined for ohmic baths only");
    }
    const double slope = bath::eta_high_temperature_slope(b);
    double hi = slope > 0.0 ? 1.0 / slope : 1.0 / (s->epsilon * s->epsilon * s->omega_c);
    // window bounded by where the oscillatory quadrature stays resolvable
    const double t_max = 1e6 / s->omega_c;
    double last_eta = 0.0;
    for (;;) {
        double e;
        try {
            e = bath::eta(b, hi);
        } catch (const NumericalError&) {
            std::ostringstream msg;
            msg << "no eta = 1 crossing found: eta = " << last_eta << " at t = " << hi / 2.0
                << " and larger times exceed the quadrature's oscillation budget";
            throw NumericalError(msg.str());
        }
        if (e >= 1.0) break;
        last_eta = e;
        hi *= 2.0;
        if (hi > t_max) {
            std::ostringstream msg;
            msg << "eta(t) does not reach 1 within t <= " << t_max << " (eta = " << last_eta
                << " at the window edge, T = " << b.temperature << ")";
            throw NumericalError(msg.str());
        }
    }
    double lo = 0.0;
    // monotone for hard/exponential ohmic kernels; 1e-9 relative width leaves
    // |eta(t*) - 1| well under the 1e-6 contract
    while ((hi - lo) > 1e-9 * hi) {
        double mid = 0.5 * (lo + hi);
        if (bath::eta(b, mid) < 1.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace dephasim::analysis
