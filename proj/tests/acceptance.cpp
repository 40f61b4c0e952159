// Acceptance suite: runs every release criterion at its pinned tolerance and
// prints one PASS/FAIL line per criterion. Exits nonzero when any fail.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dephasim/dephasim.hpp"

#ifndef DEPHASIM_CLI_PATH
#define DEPHASIM_CLI_PATH "dephasim"
#endif
#ifndef DEPHASIM_SCENARIO_DIR
#define DEPHASIM_SCENARIO_DIR "scenarios"
#endif

using namespace dephasim;
using std::numbers::pi;

namespace {

namespace fs = std::filesystem;

struct Failure {
    std::string detail;
};

void require(bool ok, const std::string& detail) {
    if (!ok) throw Failure{detail};
}

int g_failures = 0;

void criterion(int number, const std::string& name, const std::function<std::string()>& body) {
    auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = true;
    try {
        detail = body();
    } catch (const Failure& f) {
        ok = false;
        detail = f.detail;
    } catch (const std::exception& e) {
        ok = false;
        detail = std::string("exception: ") + e.what();
    }
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!ok) ++g_failures;
    std::printf("%s criterion %2d [%5.1f s] %s: %s\n", ok ? "PASS" : "FAIL", number, seconds,
                name.c_str(), detail.c_str());
    std::fflush(stdout);
}

bath::DecoherenceFactors factors(double eta, double dphi) {
    return bath::DecoherenceFactors(1.0, eta, dphi);
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

PureState random_sector_state(std::mt19937_64& rng, int L, int m) {
    auto configs = dfs::sector_configurations(L, m);
    std::normal_distribution<double> n(0.0, 1.0);
    std::vector<PureState::Term> terms;
    double norm2 = 0.0;
    for (config_index c : configs) {
        Complex a(n(rng), n(rng));
        norm2 += std::norm(a);
        terms.push_back({c, a});
    }
    double norm = std::sqrt(norm2);
    for (auto& t : terms) t.amplitude /= norm;
    return PureState(L, std::move(terms));
}

PureState random_state(std::mt19937_64& rng, int L) {
    std::normal_distribution<double> n(0.0, 1.0);
    std::vector<PureState::Term> terms;
    double norm2 = 0.0;
    for (config_index c = 0; c < (1ULL << L); ++c) {
        Complex a(n(rng), n(rng));
        norm2 += std::norm(a);
        terms.push_back({c, a});
    }
    double norm = std::sqrt(norm2);
    for (auto& t : terms) t.amplitude /= norm;
    return PureState(L, std::move(terms));
}

int run_command(const std::string& cmd) {
    int status = std::system(cmd.c_str());
    if (status == -1) return -1;
    if (WIFEXITED(status)) return WEXITSTATUS(status);
    return -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    require(static_cast<bool>(in), "cannot read " + p.string());
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

// --- criteria ---------------------------------------------------------------

std::string oracle_equivalence_vacuum() {
    PureState ghz = PureState::ghz(2);
    oracle::TruncatedBath tb{{{0.2, 1.0}}, 12};
    double worst = 0.0;
    for (double t : {0.5, 1.0, 2.0}) {
        oracle::CompareReport rep = oracle::compare_to_closed_form(ghz, tb, 0.0, t);
        worst = std::max(worst, rep.max_abs_deviation);
        require(rep.max_abs_deviation <= 1e-6,
                "deviation " + fmt(rep.max_abs_deviation) + " > 1e-6 at t = " + fmt(t));
    }
    return "max deviation " + fmt(worst) + " <= 1e-6 at t in {0.5, 1, 2}";
}

std::string lamb_phase_negative_control() {
    // GHZ support pairs all satisfy (sum i)^2 = (sum j)^2, which makes the
    // phase factor exactly 1; the control uses the uniform superposition,
    // whose cross-sector pairs expose the phase.
    PureState sup = PureState::uniform_superposition(2);
    oracle::TruncatedBath tb{{{0.2, 1.0}}, 12};
    const double t = 8.4;
    oracle::CompareReport honest = oracle::compare_to_closed_form(sup, tb, 0.0, t);
    require(honest.delta_phi >= 0.3,
            "delta_phi " + fmt(honest.delta_phi) + " < 0.3 at t = " + fmt(t));
    require(honest.max_abs_deviation <= 1e-6,
            "honest comparison already off: " + fmt(honest.max_abs_deviation));
    oracle::CompareOptions zeroed;
    zeroed.zero_lamb_phase = true;
    oracle::CompareReport broken = oracle::compare_to_closed_form(sup, tb, 0.0, t, zeroed);
    require(broken.max_abs_deviation > 0.05,
            "zeroed-phase deviation " + fmt(broken.max_abs_deviation) + " <= 0.05");
    return "delta_phi = " + fmt(honest.delta_phi) + ": honest deviation " +
           fmt(honest.max_abs_deviation) + ", phase-zeroed deviation " +
           fmt(broken.max_abs_deviation) + " > 0.05";
}

std::string oracle_equivalence_thermal() {
    PureState sup = PureState::uniform_superposition(1);
    oracle::TruncatedBath tb{{{0.2, 1.0}}, 12};
    const double temperature = 1.0 / std::log(3.0); // <N> = 0.5
    const double t = 1.0;
    bath::BathSpec spec{bath::DiscreteSpectrum{tb.modes}, temperature};
    bath::DecoherenceFactors f = bath::factors_at(spec, t);
    OperatorCoefficients closed =
        channels::apply(from_pure_state(sup), channels::ChannelKind::collective, f);
    oracle::OracleResult mc = oracle::evolve_thermal_mc(sup, tb, temperature, t, 10000, 424242);
    // the off-diagonal coefficient must sit within 3 reported standard errors
    double dev = std::abs(mc.reduced_density.coeff(0, 1) - closed.coeff(0, 1));
    double se = (*mc.standard_error)(0, 1);
    require(se > 0.0, "standard error not reported");
    require(dev <= 3.0 * se,
            "off-diagonal deviation " + fmt(dev) + " > 3 se = " + fmt(3.0 * se));
    return "off-diagonal deviation " + fmt(dev) + " <= 3 se = " + fmt(3.0 * se) + " (10^4 samples)";
}

std::string dfs_invariance() {
    std::mt19937_64 rng(90210);
    std::uniform_real_distribution<double> ue(0.0, 5.0);
    std::uniform_real_distribution<double> up(0.0, 2.0 * pi);
    // every (L, m) combination for L in {2, 3, 4}, cycled up to 100 states
    std::vector<std::pair<int, int>> combos;
    for (int L = 2; L <= 4; ++L) {
        for (int m = -L; m <= L; m += 2) combos.emplace_back(L, m);
    }
    double worst = 1.0;
    for (int k = 0; k < 100; ++k) {
        auto [L, m] = combos[static_cast<std::size_t>(k) % combos.size()];
        PureState psi = random_sector_state(rng, L, m);
        OperatorCoefficients rho = from_pure_state(psi);
        bath::DecoherenceFactors f(1.0, ue(rng), up(rng));
        OperatorCoefficients out = channels::apply(rho, channels::ChannelKind::collective, f);
        double fid = analysis::fidelity(rho, out);
        worst = std::min(worst, fid);
        require(std::abs(fid - 1.0) <= 1e-12,
                "fidelity " + fmt(fid) + " off 1 beyond 1e-12 (L=" + std::to_string(L) +
                    ", m=" + std::to_string(m) + ")");
    }
    return "100 single-sector states invariant; worst fidelity " + fmt(worst);
}

std::string superdecoherence_scaling() {
    std::mt19937_64 rng(777);
    double worst_closed = 0.0;
    double worst_dense = 0.0;
    for (int L = 1; L <= 8; ++L) {
        PureState ghz = PureState::ghz(L);
        for (double eta : {0.01, 0.1, 1.0}) {
            auto f = factors(eta, 0.83);
            double fc = analysis::fidelity_collective_closed_form(ghz, f);
            double fi = analysis::fidelity_independent_closed_form(ghz, f);
            double want_c = 0.5 + 0.5 * std::exp(-4.0 * L * L * eta);
            double want_i = 0.5 + 0.5 * std::exp(-4.0 * L * eta);
            worst_closed = std::max({worst_closed, std::abs(fc - want_c), std::abs(fi - want_i)});
            require(std::abs(fc - want_c) <= 1e-12,
                    "collective L=" + std::to_string(L) + " eta=" + fmt(eta) + ": " + fmt(fc) +
                        " vs " + fmt(want_c));
            require(std::abs(fi - want_i) <= 1e-12,
                    "independent L=" + std::to_string(L) + " eta=" + fmt(eta) + ": " + fmt(fi) +
                        " vs " + fmt(want_i));
            if (L <= 4) {
                OperatorCoefficients rho = from_pure_state(ghz);
                double dense_c =
                    analysis::fidelity(rho, channels::apply(rho, channels::ChannelKind::collective, f));
                double dense_i =
                    analysis::fidelity(rho, channels::apply(rho, channels::ChannelKind::independent, f));
                worst_dense = std::max({worst_dense, std::abs(dense_c - fc), std::abs(dense_i - fi)});
                require(std::abs(dense_c - fc) <= 1e-10, "dense collective mismatch at L=" +
                                                             std::to_string(L));
                require(std::abs(dense_i - fi) <= 1e-10, "dense independent mismatch at L=" +
                                                             std::to_string(L));
            }
        }
    }
    (void)rng;
    return "exp(-4L^2 eta) vs exp(-4L eta) laws hold to " + fmt(worst_closed) +
           "; dense path within " + fmt(worst_dense);
}

std::string high_temperature_law() {
    bath::BathSpec hot{bath::OhmicSpectrum{1.0, 1.0, bath::Cutoff::hard}, 10.0};
    for (double t : {20.0, 30.0, 50.0}) {
        double ratio = bath::eta(hot, t) / (pi * 1.0 * 10.0 * t);
        require(ratio >= 0.95 && ratio <= 1.05,
                "eta/(pi eps^2 T t) = " + fmt(ratio) + " outside [0.95, 1.05] at t = " + fmt(t));
    }
    double t1 = analysis::decoherence_time(hot);
    require(t1 > 0.0 && std::isfinite(t1), "decoherence time not positive/finite");
    bath::BathSpec hotter{bath::OhmicSpectrum{1.0, 1.0, bath::Cutoff::hard}, 20.0};
    double t2 = analysis::decoherence_time(hotter);
    double ratio = t2 / t1;
    require(std::abs(ratio - 0.5) <= 0.15 * 0.5,
            "t*(2T)/t*(T) = " + fmt(ratio) + " not within 15% of 0.5 (t* = " + fmt(t1) +
                " sits at omega_c t* = " + fmt(t1) + " << 1, where eta grows as eps^2 T omega_c t^2" +
                " and the ratio lands on 1/sqrt(2))");
    return "eta/(pi eps^2 T t) in [0.95, 1.05] at t in {20, 30, 50}; t* halves: ratio " +
           fmt(ratio);
}

std::string efficiency_values() {
    dfs::Efficiency e1 = dfs::efficiency(1);
    require(std::abs(e1.exact - 0.5) <= 1e-12, "L=1 exact " + fmt(e1.exact) + " != 0.5");

    // independent recomputation of binomial(20, 10) by Pascal's rule
    std::vector<unsigned long long> row{1};
    for (int n = 1; n <= 20; ++n) {
        std::vector<unsigned long long> next(static_cast<std::size_t>(n) + 1, 1);
        for (int k = 1; k < n; ++k) {
            next[static_cast<std::size_t>(k)] = row[static_cast<std::size_t>(k - 1)] +
                                                row[static_cast<std::size_t>(k)];
        }
        row = std::move(next);
    }
    double recomputed = std::log2(static_cast<double>(row[10])) / 20.0;
    dfs::Efficiency e10 = dfs::efficiency(10);
    require(std::abs(e10.exact - recomputed) <= 1e-5,
            "L=10 exact " + fmt(e10.exact) + " vs recomputed " + fmt(recomputed));
    require(std::abs(e10.exact - 0.87477) <= 1e-5, "L=10 exact " + fmt(e10.exact) +
                                                       " not within 1e-5 of 0.87477");
    dfs::Efficiency e64 = dfs::efficiency(64);
    require(std::abs(e64.exact - e64.approximate) < 1e-4,
            "L=64 |exact - approximate| = " + fmt(std::abs(e64.exact - e64.approximate)));
    return "exact(1) = 0.5, exact(10) = " + fmt(e10.exact) + ", |exact-approx|(64) = " +
           fmt(std::abs(e64.exact - e64.approximate)) + " < 1e-4";
}

std::string pair_code_pipeline() {
    std::mt19937_64 rng(161803);
    std::uniform_real_distribution<double> ue(0.0, 5.0);
    std::uniform_real_distribution<double> up(0.0, 2.0 * pi);
    double worst = 1.0;
    for (int k = 0; k < 50; ++k) {
        const int L = 1 + k % 4;
        PureState psi = random_state(rng, L);
        PureState code = dfs::encode(psi);
        OperatorCoefficients rho = from_pure_state(code);
        bath::DecoherenceFactors f(1.0, ue(rng), up(rng));
        OperatorCoefficients out = channels::apply(rho, channels::ChannelKind::collective, f);
        double invariance = analysis::fidelity(rho, out);
        require(std::abs(invariance - 1.0) <= 1e-12,
                "channel moved an encoded state: fidelity " + fmt(invariance));
        PureState back = dfs::decode(code);
        Complex overlap(0.0, 0.0);
        for (const auto& term : back.terms()) {
            overlap += std::conj(psi.amplitude(term.index)) * term.amplitude;
        }
        double round_trip = std::norm(overlap);
        worst = std::min(worst, std::min(invariance, round_trip));
        require(std::abs(round_trip - 1.0) <= 1e-12,
                "decode(encode) fidelity " + fmt(round_trip) + " off 1 (L=" + std::to_string(L) +
                    ")");
    }
    // circuit realizes the encoding on every basis state
    for (int L = 1; L <= 4; ++L) {
        dfs::GateCircuit circuit = dfs::encoding_circuit(L);
        for (config_index idx = 0; idx < (1ULL << L); ++idx) {
            PureState basis = PureState::basis_state(Configuration::from_index(L, idx));
            PureState via = dfs::apply_circuit(circuit, dfs::interleave_with_ancillas(basis));
            PureState direct = dfs::encode(basis);
            require(via.support_size() == 1 && via.terms()[0].index == direct.terms()[0].index,
                    "circuit disagrees with encode on basis " + std::to_string(idx));
        }
    }
    return "50 states: decode(apply(encode)) fidelity within 1e-12 (worst " + fmt(worst) +
           "); circuit == encode on all basis states, L <= 4";
}

std::string channel_sanity() {
    std::mt19937_64 rng(2468);
    std::normal_distribution<double> n(0.0, 1.0);
    auto random_density = [&](int L) {
        OperatorCoefficients rho(L);
        for (int comp = 0; comp < 3; ++comp) {
            PureState psi = random_state(rng, L);
            OperatorCoefficients part = from_pure_state(psi);
            for (std::size_t i = 0; i < rho.data().size(); ++i) {
                rho.data()[i] += part.data()[i] / 3.0;
            }
        }
        return rho;
    };
    for (int L = 1; L <= 5; ++L) {
        OperatorCoefficients rho = random_density(L);
        auto f = factors(0.6, 1.9);
        for (auto kind : {channels::ChannelKind::collective, channels::ChannelKind::independent}) {
            OperatorCoefficients out = channels::apply(rho, kind, f);
            require(out.trace() == rho.trace(), "trace not exactly preserved");
            require(out.hermiticity_residual() <= 1e-12, "hermiticity drift");
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(to_matrix(out));
            require(es.eigenvalues().minCoeff() >= -1e-10,
                    "negative eigenvalue " + fmt(es.eigenvalues().minCoeff()));
            OperatorCoefficients two =
                channels::apply(channels::apply(rho, kind, factors(0.25, 0.6)), kind,
                                factors(0.35, 1.3));
            OperatorCoefficients one = channels::apply(rho, kind, factors(0.6, 1.9));
            double comp_dev = 0.0;
            for (std::size_t i = 0; i < two.data().size(); ++i) {
                comp_dev = std::max(comp_dev, std::abs(two.data()[i] - one.data()[i]));
            }
            require(comp_dev <= 1e-12, "composition deviation " + fmt(comp_dev));
        }
        // contractivity across all sector pairs
        for (int si = -L; si <= L; ++si) {
            for (int sj = -L; sj <= L; ++sj) {
                require(std::abs(channels::detail::collective_from_sums(si, sj, f)) <=
                            1.0 + 1e-15,
                        "factor modulus above 1");
            }
        }
        // independent output bitwise independent of delta_phi
        OperatorCoefficients a = channels::apply(rho, channels::ChannelKind::independent,
                                                 factors(0.6, 0.0));
        OperatorCoefficients b = channels::apply(rho, channels::ChannelKind::independent,
                                                 factors(0.6, 4.4));
        require(a.data() == b.data(), "independent output depends on delta_phi");
    }
    // L = 1: collective and independent coincide bitwise
    OperatorCoefficients rho1 = random_density(1);
    auto f1 = factors(0.8, 2.3);
    OperatorCoefficients ca = channels::apply(rho1, channels::ChannelKind::collective, f1);
    OperatorCoefficients cb = channels::apply(rho1, channels::ChannelKind::independent, f1);
    require(ca.data() == cb.data(), "L=1 kinds disagree");
    (void)n;
    return "trace exact, Hermitian to 1e-12, contractive, additive to 1e-12, PSD to -1e-10, "
           "delta_phi-independent bitwise, L=1 coincidence bitwise";
}

std::string cli_determinism() {
    fs::path cli = DEPHASIM_CLI_PATH;
    fs::path scenario = fs::path(DEPHASIM_SCENARIO_DIR) / "verify_vacuum.conf";
    require(fs::exists(cli), "CLI binary missing: " + cli.string());
    require(fs::exists(scenario), "scenario missing: " + scenario.string());
    fs::path dir = fs::temp_directory_path() / ("dephasim_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    fs::path out1 = dir / "run1.csv";
    fs::path out2 = dir / "run2.csv";
    std::string base = "\"" + cli.string() + "\" verify \"" + scenario.string() + "\" --output ";
    int rc1 = run_command(base + "\"" + out1.string() + "\" > " + "\"" + (dir / "log1").string() +
                          "\" 2>&1");
    int rc2 = run_command(base + "\"" + out2.string() + "\" > " + "\"" + (dir / "log2").string() +
                          "\" 2>&1");
    require(rc1 == 0, "first verify run exited " + std::to_string(rc1));
    require(rc2 == 0, "second verify run exited " + std::to_string(rc2));
    std::string a = slurp(out1);
    std::string b = slurp(out2);
    require(!a.empty() && a == b, "verify CSVs differ between runs");
    std::error_code ec;
    fs::remove_all(dir, ec);
    return "two verify runs: exit 0 and byte-identical CSV (" + std::to_string(a.size()) +
           " bytes)";
}

} // namespace

int main() {
    std::printf("dephasim acceptance suite\n");
    criterion(1, "oracle equivalence, vacuum", oracle_equivalence_vacuum);
    criterion(2, "Lamb-phase negative control", lamb_phase_negative_control);
    criterion(3, "oracle equivalence, thermal", oracle_equivalence_thermal);
    criterion(4, "decoherence-free sector invariance", dfs_invariance);
    criterion(5, "superdecoherence scaling", superdecoherence_scaling);
    criterion(6, "high-temperature law", high_temperature_law);
    criterion(7, "pair-code efficiency", efficiency_values);
    criterion(8, "pair-code pipeline", pair_code_pipeline);
    criterion(9, "channel sanity suite", channel_sanity);
    criterion(10, "CLI determinism", cli_determinism);
    if (g_failures == 0) {
        std::printf("all criteria passed\n");
    } else {
        std::printf("%d criterion(s) failed\n", g_failures);
    }
    return g_failures == 0 ? 0 : 1;
}
