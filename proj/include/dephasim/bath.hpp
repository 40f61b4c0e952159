// bath.hpp — bosonic environment models and the decoherence integrals.
//
// Natural units hbar = k_B = 1 throughout; the ohmic coupling density is
// kappa^2(omega) = epsilon^2 * omega below the cutoff.

#pragma once

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "dephasim/detail/quadrature.hpp"
#include "dephasim/detail/summation.hpp"
#include "dephasim/errors.hpp"

namespace dephasim::bath {

enum class Cutoff { hard, exponential };

struct OhmicSpectrum {
    double epsilon;
    double omega_c;
    Cutoff cutoff = Cutoff::hard;
};

struct Mode {
    double kappa;
    double omega;
};

struct DiscreteSpectrum {
    std::vector<Mode> modes;
};

using SpectralModel = std::variant<OhmicSpectrum, DiscreteSpectrum>;

struct BathSpec {
    SpectralModel spectral;
    double temperature = 0.0;
};

inline void validate(const BathSpec& b) {
    if (!(b.temperature >= 0.0) || !std::isfinite(b.temperature)) {
        throw ValidationError("bath temperature must be finite and >= 0");
    }
    if (const auto* ohmic = std::get_if<OhmicSpectrum>(&b.spectral)) {
        if (!(ohmic->epsilon > 0.0) || !std::isfinite(ohmic->epsilon) ||
            !(ohmic->omega_c > 0.0) || !std::isfinite(ohmic->omega_c)) {
            throw ValidationError("ohmic spectrum requires finite epsilon > 0 and omega_c > 0");
        }
    } else {
        const auto& d = std::get<DiscreteSpectrum>(b.spectral);
        if (d.modes.empty()) throw ValidationError("discrete spectrum requires at least one mode");
        for (const Mode& m : d.modes) {
            if (!(m.omega > 0.0) || !std::isfinite(m.omega) || m.kappa < 0.0 ||
                !std::isfinite(m.kappa)) {
                throw ValidationError("discrete modes require omega > 0 and kappa >= 0");
            }
        }
    }
}

// The (eta, delta_phi) pair evaluated at one time.
class DecoherenceFactors {
public:
    DecoherenceFactors(double time, double eta, double delta_phi)
        : time_(time), eta_(eta), delta_phi_(delta_phi) {
        if (!(time_ >= 0.0) || !std::isfinite(time_)) {
            throw ValidationError("factor time must be finite and >= 0");
        }
        if (!(eta_ >= 0.0) || !std::isfinite(eta_) || !std::isfinite(delta_phi_)) {
            throw ValidationError("eta must be finite and >= 0, delta_phi finite");
        }
        if (time_ == 0.0 && (eta_ != 0.0 || delta_phi_ != 0.0)) {
            throw ValidationError("decoherence factors must vanish at time 0");
        }
    }

    double time() const { return time_; }
    double eta() const { return eta_; }
    double delta_phi() const { return delta_phi_; }

private:
    double time_;
    double eta_;
    double delta_phi_;
};

// Mean occupation 1/(exp(omega/T) - 1); 0 in vacuum.
inline double mean_occupation(double omega, double temperature) {
    if (!(omega > 0.0)) throw DomainError("mean_occupation requires omega > 0");
    if (!(temperature >= 0.0)) throw DomainError("temperature must be >= 0");
    if (temperature == 0.0) return 0.0;
    return 1.0 / std::expm1(omega / temperature);
}

namespace detail {

inline double thermal_weight(double omega, double temperature) {
    // <N> + 1/2
    if (temperature == 0.0) return 0.5;
    return 1.0 / std::expm1(omega / temperature) + 0.5;
}

// 4 sin^2(omega t / 2) / omega^2, with the omega t -> 0 limit t^2.
inline double damping_kernel(double omega, double t) {
    double x = omega * t;
    if (x < 1e-6) return t * t;
    double s = std::sin(x / 2.0);
    return 4.0 * s * s / (omega * omega);
}

// (omega t - sin(omega t)) / omega^2 -> 0 as omega -> 0.
inline double phase_kernel(double omega, double t) {
    double x = omega * t;
    if (x < 0.25) {
        // (x - sin x)/x^2 by series; avoids the cancellation in x - sin x
        double x2 = x * x;
        double p = x / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0 * (1.0 - x2 / 72.0)));
        return p * t * t;
    }
    return (x - std::sin(x)) / (omega * omega);
}

// Integrates epsilon^2 * omega * kernel(omega) over the ohmic band with the
// configured cutoff.
template <class Kernel>
double ohmic_integral(const OhmicSpectrum& s, Kernel&& kernel, double rel_tol,
                      const std::string& what) {
    const double eps2 = s.epsilon * s.epsilon;
    if (s.cutoff == Cutoff::hard) {
        auto f = [&](double w) { return w <= 0.0 ? 0.0 : eps2 * w * kernel(w); };
        return dephasim::detail::integrate(f, 0.0, s.omega_c, rel_tol, what);
    }
    auto f = [&](double w) {
        return w <= 0.0 ? 0.0 : eps2 * w * std::exp(-w / s.omega_c) * kernel(w);
    };
    // e^-40 ~ 4e-18 leaves the truncated tail far below the tolerance
    return dephasim::detail::integrate(f, 0.0, 40.0 * s.omega_c, rel_tol, what);
}

} // namespace detail

inline constexpr double kQuadratureRelTol = 1e-9;

// Phase damping factor
//   eta(t) = integral dw kappa^2(w) [4 sin^2(wt/2)/w^2] (<N_w> + 1/2);
// exact finite sum for discrete spectra.
inline double eta(const BathSpec& b, double t) {
    validate(b);
    if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("eta requires t >= 0");
    if (t == 0.0) return 0.0;
    if (const auto* d = std::get_if<DiscreteSpectrum>(&b.spectral)) {
        dephasim::detail::NeumaierSum sum;
        for (const Mode& m : d->modes) {
            sum.add(m.kappa * m.kappa * detail::damping_kernel(m.omega, t) *
                    detail::thermal_weight(m.omega, b.temperature));
        }
        return sum.value();
    }
    const auto& s = std::get<OhmicSpectrum>(b.spectral);
    double T = b.temperature;
    // limit of the full integrand at w = 0: eps^2 * t^2 * T (0 in vacuum)
    auto kernel = [&](double w) {
        return detail::damping_kernel(w, t) * detail::thermal_weight(w, T);
    };
    return detail::ohmic_integral(s, kernel, kQuadratureRelTol, "eta");
}

// Lamb phase shift
//   delta_phi(t) = integral dw kappa^2(w) [(wt - sin wt)/w^2].
inline double delta_phi(const BathSpec& b, double t) {
    validate(b);
    if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("delta_phi requires t >= 0");
    if (t == 0.0) return 0.0;
    if (const auto* d = std::get_if<DiscreteSpectrum>(&b.spectral)) {
        dephasim::detail::NeumaierSum sum;
        for (const Mode& m : d->modes) {
            sum.add(m.kappa * m.kappa * detail::phase_kernel(m.omega, t));
        }
        return sum.value();
    }
    const auto& s = std::get<OhmicSpectrum>(b.spectral);
    auto kernel = [&](double w) { return detail::phase_kernel(w, t); };
    return detail::ohmic_integral(s, kernel, kQuadratureRelTol, "delta_phi");
}

inline DecoherenceFactors factors_at(const BathSpec& b, double t) {
    return DecoherenceFactors(t, eta(b, t), delta_phi(b, t));
}

// High-temperature slope pi eps^2 T of eta(t) ~ pi eps^2 T t, valid for
// T >> omega_c and t >> 1/omega_c.
inline double eta_high_temperature_slope(const BathSpec& b) {
    validate(b);
    const auto* s = std::get_if<OhmicSpectrum>(&b.spectral);
    if (s == nullptr) {
        throw UnsupportedModelError("high-temperature slope is defined for ohmic baths only");
    }
    return std::numbers::pi * s->epsilon * s->epsilon * b.temperature;
}

// Midpoint discretization of an ohmic spectrum on [0, omega_c]:
// omega_k = (k - 1/2) dw, kappa_k^2 = kappa^2(omega_k) * dw * cutoff weight.
inline BathSpec discretize(const BathSpec& b, int num_modes) {
    validate(b);
    if (num_modes < 1) throw ValidationError("discretize requires num_modes >= 1");
    const auto* s = std::get_if<OhmicSpectrum>(&b.spectral);
    if (s == nullptr) {
        throw UnsupportedModelError("discretize applies to ohmic spectra only");
    }
    const double dw = s->omega_c / num_modes;
    DiscreteSpectrum out;
    out.modes.reserve(static_cast<std::size_t>(num_modes));
    for (int k = 1; k <= num_modes; ++k) {
        double w = (k - 0.5) * dw;
        double weight = s->cutoff == Cutoff::hard ? 1.0 : std::exp(-w / s->omega_c);
        double kappa2 = s->epsilon * s->epsilon * w * dw * weight;
        out.modes.push_back({std::sqrt(kappa2), w});
    }
    return BathSpec{out, b.temperature};
}

} // namespace dephasim::bath
