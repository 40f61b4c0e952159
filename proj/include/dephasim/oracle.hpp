// oracle.hpp — brute-force system+bath verification.
//
// Builds the dephasing Hamiltonian
//   H = sum_k [ kappa_k (a_k + a_k^dag) sum_l sigma_l^z + omega_k n_k ]
// for a finite mode set with Fock truncation, evolves exactly per sigma_z
// sector (the conserved qubit configuration reduces the joint problem to
// driven-oscillator blocks of dimension (N_max+1)^K), traces out the bath,
// and reports the reduced density for comparison against the closed-form
// channel.

#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <utility>
#include <vector>

#include "dephasim/bath.hpp"
#include "dephasim/channels.hpp"
#include "dephasim/detail/bits.hpp"
#include "dephasim/detail/rng.hpp"
#include "dephasim/errors.hpp"
#include "dephasim/register.hpp"

namespace dephasim::oracle {

inline constexpr int kMaxOracleQubits = 4;
inline constexpr std::size_t kMaxSectorDim = 20000;  // (N_max+1)^K per sector
inline constexpr std::size_t kMaxJointDim = 2048;    // dense build_hamiltonian only
inline constexpr double kTruncationWarnLevel = 1e-6;

struct TruncatedBath {
    std::vector<bath::Mode> modes;
    int fock_cutoff;  // Fock space per mode has dimension fock_cutoff + 1
};

struct OracleResult {
    OperatorCoefficients reduced_density;
    double truncation_diagnostic = 0.0;  // max top-Fock-level population seen
    bool truncation_warning = false;
    // per-entry standard error of the reduced density, Monte Carlo runs only
    std::optional<Eigen::MatrixXd> standard_error;
};

namespace detail {

inline std::size_t bath_dimension(const TruncatedBath& tb) {
    std::size_t dim = 1;
    for (std::size_t k = 0; k < tb.modes.size(); ++k) {
        dim *= static_cast<std::size_t>(tb.fock_cutoff) + 1;
        if (dim > kMaxSectorDim) {
            std::ostringstream msg;
            msg << "bath dimension (N_max+1)^K exceeds the per-sector cap " << kMaxSectorDim;
            throw SizeError(msg.str());
        }
    }
    return dim;
}

inline void validate_bath(const TruncatedBath& tb) {
    if (tb.modes.empty()) throw ValidationError("truncated bath requires at least one mode");
    if (tb.fock_cutoff < 1) throw ValidationError("fock_cutoff must be >= 1");
    for (const bath::Mode& m : tb.modes) {
        if (!(m.omega > 0.0) || !std::isfinite(m.omega) || m.kappa < 0.0 ||
            !std::isfinite(m.kappa)) {
            throw ValidationError("bath modes require omega > 0 and kappa >= 0");
        }
    }
    bath_dimension(tb);
}

// Adequacy heuristic: the coherent displacement per mode is bounded by
// 2 kappa |s| / omega with |s| <= L, so demand headroom above 4x that
// excitation scale. Breaching it only flags the result; the diagnostic
// stays authoritative.
inline bool truncation_adequate(const TruncatedBath& tb, int num_qubits) {
    double needed = 0.0;
    for (const bath::Mode& m : tb.modes) {
        double scale = m.kappa * num_qubits / m.omega;
        needed = std::max(needed, 4.0 * scale * scale + 6.0);
    }
    return tb.fock_cutoff >= needed;
}

inline Eigen::MatrixXd position_op(int nmax) {
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(nmax + 1, nmax + 1);
    for (int n = 0; n < nmax; ++n) {
        double v = std::sqrt(static_cast<double>(n + 1));
        x(n, n + 1) = v;
        x(n + 1, n) = v;
    }
    return x;
}

inline Eigen::MatrixXd number_op(int nmax) {
    Eigen::VectorXd d(nmax + 1);
    for (int n = 0; n <= nmax; ++n) d(n) = n;
    return d.asDiagonal();
}

inline Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

// op acting on mode k (0-based), identity elsewhere; mode 0 most significant.
inline Eigen::MatrixXd embed_mode(const Eigen::MatrixXd& op, std::size_t k,
                                  std::size_t num_modes, int nmax) {
    const int d = nmax + 1;
    Eigen::MatrixXd out = Eigen::MatrixXd::Identity(1, 1);
    for (std::size_t m = 0; m < num_modes; ++m) {
        out = kron(out, m == k ? op : Eigen::MatrixXd::Identity(d, d).eval());
    }
    return out;
}

// Bath block for one sigma_z sector: H_S = sum_k [omega_k n_k + kappa_k S x_k].
inline Eigen::MatrixXd sector_hamiltonian(int sigma_z_sum, const TruncatedBath& tb) {
    const std::size_t dim = bath_dimension(tb);
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim),
                                              static_cast<Eigen::Index>(dim));
    for (std::size_t k = 0; k < tb.modes.size(); ++k) {
        h += tb.modes[k].omega * embed_mode(number_op(tb.fock_cutoff), k, tb.modes.size(),
                                            tb.fock_cutoff);
        h += tb.modes[k].kappa * sigma_z_sum *
             embed_mode(position_op(tb.fock_cutoff), k, tb.modes.size(), tb.fock_cutoff);
    }
    return h;
}

struct SectorEvolution {
    Eigen::VectorXd energies;
    Eigen::MatrixXd vectors;

    Eigen::VectorXcd propagate(const Eigen::VectorXcd& v0, double t) const {
        Eigen::VectorXcd c = vectors.transpose() * v0;
        for (Eigen::Index i = 0; i < c.size(); ++i) {
            c(i) *= std::polar(1.0, -energies(i) * t);
        }
        return vectors * c;
    }
};

inline SectorEvolution diagonalize_sector(int sigma_z_sum, const TruncatedBath& tb) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sector_hamiltonian(sigma_z_sum, tb));
    if (solver.info() != Eigen::Success) {
        throw NumericalError("sector Hamiltonian eigendecomposition failed");
    }
    return {solver.eigenvalues(), solver.eigenvectors()};
}

// Basis states with any mode at the top Fock level.
inline std::vector<bool> top_level_mask(const TruncatedBath& tb) {
    const std::size_t dim = bath_dimension(tb);
    const std::size_t d = static_cast<std::size_t>(tb.fock_cutoff) + 1;
    std::vector<bool> mask(dim, false);
    for (std::size_t idx = 0; idx < dim; ++idx) {
        std::size_t rest = idx;
        for (std::size_t k = 0; k < tb.modes.size(); ++k) {
            if (rest % d == d - 1) {
                mask[idx] = true;
                break;
            }
            rest /= d;
        }
    }
    return mask;
}

inline double top_population(const std::vector<bool>& mask, const Eigen::VectorXcd& v) {
    double pop = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (mask[static_cast<std::size_t>(i)]) pop += std::norm(v(i));
    }
    return pop;
}

// Truncated coherent state, renormalized.
inline Eigen::VectorXcd coherent_vector(Complex alpha, int nmax) {
    Eigen::VectorXcd v(nmax + 1);
    v(0) = 1.0;
    for (int n = 1; n <= nmax; ++n) {
        v(n) = v(n - 1) * alpha / std::sqrt(static_cast<double>(n));
    }
    v *= std::exp(-0.5 * std::norm(alpha));
    v.normalize();
    return v;
}

inline Eigen::VectorXcd kron_vec(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
    Eigen::VectorXcd out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        out.segment(i * b.size(), b.size()) = a(i) * b;
    }
    return out;
}

// Distinct physical sigma_z sums over the support (label sum negated).
inline std::vector<int> support_sectors(const PureState& psi) {
    std::vector<int> sectors;
    for (const PureState::Term& t : psi.terms()) {
        int s = -dephasim::detail::label_sum(t.index, psi.num_qubits());
        if (std::find(sectors.begin(), sectors.end(), s) == sectors.end()) {
            sectors.push_back(s);
        }
    }
    return sectors;
}

struct BathFactors {
    std::map<std::pair<int, int>, Complex> g;  // (S_row, S_col) -> <chi_col|chi_row>
    double top_population = 0.0;
};

// Evolves one initial bath vector under every needed sector and returns the
// pairwise overlaps; the diagnostic samples the top-level population at
// intermediate times as well.
inline BathFactors evolve_factors(const std::map<int, SectorEvolution>& evolutions,
                                  const std::vector<bool>& mask,
                                  const Eigen::VectorXcd& chi0, double t) {
    BathFactors out;
    std::map<int, Eigen::VectorXcd> final_vectors;
    for (const auto& [s, evo] : evolutions) {
        for (int step = 1; step <= 8; ++step) {
            Eigen::VectorXcd v = evo.propagate(chi0, t * step / 8.0);
            if (step == 8) final_vectors.emplace(s, std::move(v));
            else out.top_population = std::max(out.top_population, top_population(mask, v));
        }
        out.top_population =
            std::max(out.top_population, top_population(mask, final_vectors.at(s)));
    }
    for (const auto& [si, vi] : final_vectors) {
        for (const auto& [sj, vj] : final_vectors) {
            out.g[{si, sj}] = vj.dot(vi);  // conjugates the left argument
        }
    }
    return out;
}

inline void validate_inputs(const PureState& psi, const TruncatedBath& tb, double t) {
    if (psi.num_qubits() > kMaxOracleQubits) {
        throw SizeError("oracle evolution limited to 4 qubits");
    }
    validate_bath(tb);
    if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("oracle requires t >= 0");
}

inline OperatorCoefficients assemble_density(const PureState& psi, const BathFactors& f) {
    const int L = psi.num_qubits();
    OperatorCoefficients rho(L);
    for (const PureState::Term& ti : psi.terms()) {
        const int si = -dephasim::detail::label_sum(ti.index, L);
        for (const PureState::Term& tj : psi.terms()) {
            const int sj = -dephasim::detail::label_sum(tj.index, L);
            rho.set_coeff(ti.index, tj.index,
                          ti.amplitude * std::conj(tj.amplitude) * f.g.at({si, sj}));
        }
    }
    return rho;
}

} // namespace detail

// Dense joint Hamiltonian (system x bath ordering, qubit configurations
// outermost); block diagonal in the qubit computational basis.
inline Eigen::MatrixXcd build_hamiltonian(int num_qubits, const TruncatedBath& tb) {
    if (num_qubits < 1 || num_qubits > kMaxOracleQubits) {
        throw SizeError("oracle Hamiltonians limited to 4 qubits");
    }
    detail::validate_bath(tb);
    const std::size_t bdim = detail::bath_dimension(tb);
    const std::size_t sys_dim = 1ULL << num_qubits;
    if (sys_dim * bdim > kMaxJointDim) {
        std::ostringstream msg;
        msg << "joint dimension " << sys_dim * bdim << " exceeds the dense cap " << kMaxJointDim;
        throw SizeError(msg.str());
    }
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(sys_dim * bdim),
                                                static_cast<Eigen::Index>(sys_dim * bdim));
    for (std::size_t n = 0; n < sys_dim; ++n) {
        // sigma_z eigenvalue sum of configuration n (label sum negated)
        const int s = -dephasim::detail::label_sum(n, num_qubits);
        h.block(static_cast<Eigen::Index>(n * bdim), static_cast<Eigen::Index>(n * bdim),
                static_cast<Eigen::Index>(bdim), static_cast<Eigen::Index>(bdim)) =
            detail::sector_hamiltonian(s, tb).cast<Complex>();
    }
    return h;
}

// Exact evolution of |psi> x |vacuum> followed by the bath trace.
inline OracleResult evolve_vacuum(const PureState& psi, const TruncatedBath& tb, double t) {
    detail::validate_inputs(psi, tb, t);
    if (t == 0.0) {
        return {from_pure_state(psi), 0.0, !detail::truncation_adequate(tb, psi.num_qubits()),
                std::nullopt};
    }
    const std::size_t bdim = detail::bath_dimension(tb);
    Eigen::VectorXcd vac = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(bdim));
    vac(0) = 1.0;

    std::map<int, detail::SectorEvolution> evolutions;
    for (int s : detail::support_sectors(psi)) {
        evolutions.emplace(s, detail::diagonalize_sector(s, tb));
    }
    const std::vector<bool> mask = detail::top_level_mask(tb);
    detail::BathFactors f = detail::evolve_factors(evolutions, mask, vac, t);

    OracleResult result{detail::assemble_density(psi, f), f.top_population, false, std::nullopt};
    result.truncation_warning = result.truncation_diagnostic > kTruncationWarnLevel ||
                                !detail::truncation_adequate(tb, psi.num_qubits());
    return result;
}

// Monte Carlo average over the thermal P-representation: coherent initial
// amplitudes alpha_k drawn from the complex Gaussian with variance <N_k>,
// each sample evolved exactly, reduced densities averaged. Deterministic
// for a fixed seed.
inline OracleResult evolve_thermal_mc(const PureState& psi, const TruncatedBath& tb,
                                      double temperature, double t, int num_samples,
                                      std::uint64_t seed) {
    detail::validate_inputs(psi, tb, t);
    if (!(temperature > 0.0)) {
        throw DomainError("thermal evolution requires temperature > 0 (use evolve_vacuum at T=0)");
    }
    if (num_samples < 2) throw ValidationError("thermal sampling requires at least 2 samples");

    std::vector<double> occupations;
    occupations.reserve(tb.modes.size());
    for (const bath::Mode& m : tb.modes) {
        occupations.push_back(bath::mean_occupation(m.omega, temperature));
    }

    std::map<int, detail::SectorEvolution> evolutions;
    for (int s : detail::support_sectors(psi)) {
        evolutions.emplace(s, detail::diagonalize_sector(s, tb));
    }
    const std::vector<bool> mask = detail::top_level_mask(tb);

    // Welford accumulators per distinct sector pair
    struct Accum {
        Complex mean{0.0, 0.0};
        double m2 = 0.0;  // sum of squared distances, Re and Im combined
    };
    std::map<std::pair<int, int>, Accum> stats;

    std::mt19937_64 rng(seed);
    double diag = 0.0;
    for (int sample = 0; sample < num_samples; ++sample) {
        Eigen::VectorXcd chi0 = Eigen::VectorXcd::Ones(1);
        for (std::size_t k = 0; k < tb.modes.size(); ++k) {
            Complex alpha = dephasim::detail::complex_gaussian(rng, occupations[k]);
            chi0 = detail::kron_vec(chi0, detail::coherent_vector(alpha, tb.fock_cutoff));
        }
        detail::BathFactors f = detail::evolve_factors(evolutions, mask, chi0, t);
        diag = std::max(diag, f.top_population);
        const double n = sample + 1;
        for (const auto& [key, g] : f.g) {
            Accum& a = stats[key];
            Complex d1 = g - a.mean;
            a.mean += d1 / n;
            Complex d2 = g - a.mean;
            a.m2 += d1.real() * d2.real() + d1.imag() * d2.imag();
        }
    }

    detail::BathFactors mean_factors;
    std::map<std::pair<int, int>, double> se_factors;
    for (const auto& [key, a] : stats) {
        mean_factors.g[key] = a.mean;
        // identical-sector overlaps are <chi|U^dag U|chi> = 1 with exactly
        // zero variance; the accumulated m2 there is rounding noise
        se_factors[key] = key.first == key.second
                              ? 0.0
                              : std::sqrt(a.m2 / (num_samples - 1) / num_samples);
    }

    OracleResult result{detail::assemble_density(psi, mean_factors), diag, false, std::nullopt};
    const int L = psi.num_qubits();
    Eigen::MatrixXd se = Eigen::MatrixXd::Zero(1LL << L, 1LL << L);
    for (const PureState::Term& ti : psi.terms()) {
        const int si = -dephasim::detail::label_sum(ti.index, L);
        for (const PureState::Term& tj : psi.terms()) {
            const int sj = -dephasim::detail::label_sum(tj.index, L);
            se(static_cast<Eigen::Index>(ti.index), static_cast<Eigen::Index>(tj.index)) =
                std::abs(ti.amplitude) * std::abs(tj.amplitude) * se_factors.at({si, sj});
        }
    }
    result.standard_error = std::move(se);
    result.truncation_warning = result.truncation_diagnostic > kTruncationWarnLevel ||
                                !detail::truncation_adequate(tb, psi.num_qubits());
    return result;
}

struct CompareOptions {
    int num_samples = 10000;
    std::uint64_t seed = 1;
    bool zero_lamb_phase = false;  // negative control: drop the phase factor
};

struct CompareReport {
    double max_abs_deviation = 0.0;
    double eta = 0.0;
    double delta_phi = 0.0;  // value used in the closed form
    double truncation_diagnostic = 0.0;
    bool truncation_warning = false;
    bool thermal = false;
    double max_standard_error = 0.0;    // thermal only
    double max_sigma_deviation = 0.0;   // thermal only; entries with se > 0
};

// Runs the oracle and the closed-form channel on the same discrete modes and
// reports the elementwise maximum deviation.
inline CompareReport compare_to_closed_form(const PureState& psi, const TruncatedBath& tb,
                                            double temperature, double t,
                                            const CompareOptions& options = {}) {
    bath::BathSpec spec{bath::DiscreteSpectrum{tb.modes}, temperature};
    const double eta = bath::eta(spec, t);
    const double dphi = options.zero_lamb_phase ? 0.0 : bath::delta_phi(spec, t);
    bath::DecoherenceFactors factors(t, eta, dphi);

    OperatorCoefficients closed =
        channels::apply(from_pure_state(psi), channels::ChannelKind::collective, factors);
    OracleResult oracle = temperature > 0.0
                              ? evolve_thermal_mc(psi, tb, temperature, t,
                                                  options.num_samples, options.seed)
                              : evolve_vacuum(psi, tb, t);

    CompareReport report;
    report.eta = eta;
    report.delta_phi = dphi;
    report.truncation_diagnostic = oracle.truncation_diagnostic;
    report.truncation_warning = oracle.truncation_warning;
    report.thermal = temperature > 0.0;

    const config_index dim = closed.dim();
    for (config_index i = 0; i < dim; ++i) {
        for (config_index j = 0; j < dim; ++j) {
            double dev = std::abs(oracle.reduced_density.coeff(i, j) - closed.coeff(i, j));
            report.max_abs_deviation = std::max(report.max_abs_deviation, dev);
            if (report.thermal) {
                double se = (*oracle.standard_error)(static_cast<Eigen::Index>(i),
                                                     static_cast<Eigen::Index>(j));
                report.max_standard_error = std::max(report.max_standard_error, se);
                if (se > 0.0) {
                    report.max_sigma_deviation = std::max(report.max_sigma_deviation, dev / se);
                }
            }
        }
    }
    return report;
}

} // namespace dephasim::oracle
