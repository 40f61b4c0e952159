// cli.hpp — experiment runner behind the dephasim command-line tool.

#pragma once

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "dephasim/analysis.hpp"
#include "dephasim/bath.hpp"
#include "dephasim/channels.hpp"
#include "dephasim/dfs.hpp"
#include "dephasim/errors.hpp"
#include "dephasim/oracle.hpp"
#include "dephasim/register.hpp"
#include "dephasim/scenario.hpp"
#include "dephasim/version.hpp"

namespace dephasim::cli {

namespace detail {

inline std::string csv_prelude(const Scenario& s, const std::string& command) {
    std::ostringstream out;
    out << "# dephasim " << kVersion << " " << command << "\n";
    out << "# natural units hbar = k_B = 1\n";
    for (const auto& [key, value] : s.echo) out << "# " << key << " = " << value << "\n";
    return out.str();
}

inline void append_summary_decoherence_time(const Scenario& s, std::ostream& out) {
    if (!std::holds_alternative<bath::OhmicSpectrum>(s.bath_spec.spectral)) {
        out << "decoherence time: n/a (discrete bath)\n";
        return;
    }
    try {
        out << "decoherence time (eta = 1): " << detail::format17(analysis::decoherence_time(s.bath_spec))
            << "\n";
    } catch (const Error& e) {
        out << "decoherence time: n/a (" << e.what() << ")\n";
    }
}

} // namespace detail

// Sweeps the time grid and writes time,eta,delta_phi,fidelity,purity rows.
inline void run_scenario(const Scenario& s, std::ostream& status) {
    if (s.output_path.empty()) {
        throw ConfigError("run requires output.path (or --output)");
    }
    PureState psi = build_state(s);
    analysis::FidelityCurve curve;
    std::ostringstream csv;
    csv << detail::csv_prelude(s, "run");
    csv << "time,eta,delta_phi,fidelity,purity\n";
    for (double t : s.grid.times()) {
        bath::DecoherenceFactors f = bath::factors_at(s.bath_spec, t);
        double fidelity = s.kind == channels::ChannelKind::collective
                              ? analysis::fidelity_collective_closed_form(psi, f)
                              : analysis::fidelity_independent_closed_form(psi, f);
        double purity = analysis::purity_after_dephasing(psi, s.kind, f);
        curve.times.push_back(t);
        curve.values.push_back(fidelity);
        csv << detail::format17(t) << ',' << detail::format17(f.eta()) << ','
            << detail::format17(f.delta_phi()) << ',' << detail::format17(fidelity) << ','
            << detail::format17(purity) << "\n";
    }
    curve.validate();
    detail::write_file_atomic(s.output_path, csv.str());
    status << "wrote " << s.output_path.string() << " (" << s.grid.count << " rows, "
           << psi.num_qubits() << " qubits, "
           << (s.kind == channels::ChannelKind::collective ? "collective" : "independent")
           << " channel)\n";
    detail::append_summary_decoherence_time(s, status);
}

// Sector table for an L-qubit register plus the pair-code figures on 2L.
inline void dfs_info(int logical_qubits, std::ostream& out) {
    if (logical_qubits < 1 || logical_qubits > 4096) {
        throw ValidationError("dfs-info requires 1 <= L <= 4096");
    }
    const int L = logical_qubits;
    out << "register L = " << L << "\n";
    out << "  m\tdim A_m\n";
    for (int m = -L; m <= L; m += 2) {
        out << "  " << m << "\t" << dfs::sector_dimension(L, m) << "\n";
    }
    dfs::PairCode code{L};
    dfs::Efficiency eff = dfs::efficiency(L);
    out << "pair code: " << L << " logical -> " << code.physical_qubits()
        << " physical qubits\n";
    out << "  dim S_0(" << code.physical_qubits()
        << ") = " << dfs::sector_dimension(code.physical_qubits(), 0) << "\n";
    out << "  efficiency exact = " << detail::format17(eff.exact)
        << ", approximate = " << detail::format17(eff.approximate) << "\n";
}

struct VerifyOutcome {
    bool passed = false;
    double threshold = 0.0;
    bool thermal = false;
    double worst = 0.0;  // max deviation (vacuum) or max sigma deviation (thermal)
};

// Oracle-vs-closed-form comparison over the scenario grid; writes a CSV
// report and prints one line per time point.
inline VerifyOutcome verify_scenario(const Scenario& s, std::optional<double> threshold_override,
                                     std::optional<std::uint64_t> seed_override,
                                     std::ostream& status) {
    if (!s.oracle_block) throw ConfigError("verify requires an oracle block (oracle.fock_cutoff)");
    if (s.output_path.empty()) throw ConfigError("verify requires output.path (or --output)");
    const auto* discrete = std::get_if<bath::DiscreteSpectrum>(&s.bath_spec.spectral);
    if (discrete == nullptr) {
        throw ConfigError("verify requires bath.model = discrete (explicit modes)");
    }
    if (s.state.family == StateFamily::encoded ? 2 * s.register_size > oracle::kMaxOracleQubits
                                               : s.register_size > oracle::kMaxOracleQubits) {
        throw SizeError("oracle verification limited to 4 qubits");
    }

    PureState psi = build_state(s);
    oracle::TruncatedBath tb{discrete->modes, s.oracle_block->fock_cutoff};
    const bool thermal = s.bath_spec.temperature > 0.0;

    oracle::CompareOptions options;
    options.num_samples = s.oracle_block->num_samples;
    options.seed = seed_override.value_or(s.oracle_block->seed);

    VerifyOutcome outcome;
    outcome.thermal = thermal;
    outcome.threshold = threshold_override.value_or(
        s.oracle_block->threshold.value_or(thermal ? 3.0 : 1e-6));

    // header echoes the effective seed and threshold
    Scenario annotated = s;
    annotated.oracle_block->seed = options.seed;
    annotated.oracle_block->threshold = outcome.threshold;
    annotated.echo = scenario_echo(annotated);

    std::ostringstream csv;
    csv << detail::csv_prelude(annotated, "verify");
    csv << "time,eta,delta_phi,deviation,truncation_diagnostic,max_standard_error,"
           "sigma_deviation\n";
    for (double t : s.grid.times()) {
        oracle::CompareReport r =
            oracle::compare_to_closed_form(psi, tb, s.bath_spec.temperature, t, options);
        csv << detail::format17(t) << ',' << detail::format17(r.eta) << ','
            << detail::format17(r.delta_phi) << ',' << detail::format17(r.max_abs_deviation)
            << ',' << detail::format17(r.truncation_diagnostic) << ','
            << detail::format17(r.max_standard_error) << ','
            << detail::format17(r.max_sigma_deviation) << "\n";
        double score = thermal ? r.max_sigma_deviation : r.max_abs_deviation;
        outcome.worst = std::max(outcome.worst, score);
        status << "t = " << t << ": max deviation = " << r.max_abs_deviation
               << ", eta = " << r.eta << ", delta_phi = " << r.delta_phi
               << ", truncation = " << r.truncation_diagnostic;
        if (thermal) {
            status << ", max std error = " << r.max_standard_error
                   << ", sigma deviation = " << r.max_sigma_deviation;
        }
        if (r.truncation_warning) status << "  [truncation warning]";
        status << "\n";
    }
    detail::write_file_atomic(s.output_path, csv.str());
    outcome.passed = outcome.worst <= outcome.threshold;
    status << "verification " << (outcome.passed ? "PASSED" : "FAILED") << ": worst "
           << (thermal ? "sigma deviation " : "deviation ") << outcome.worst
           << (thermal ? " (threshold " : " (threshold ") << outcome.threshold << ")\n";
    status << "wrote " << s.output_path.string() << "\n";
    return outcome;
}

inline void encode_file(const std::filesystem::path& in, const std::filesystem::path& out,
                        std::ostream& status) {
    PureState psi = load_state_file(in);
    PureState encoded = dfs::encode(psi);
    write_state_file(out, encoded);
    status << "encoded " << psi.num_qubits() << " -> " << encoded.num_qubits()
           << " qubits, wrote " << out.string() << "\n";
}

inline void decode_file(const std::filesystem::path& in, const std::filesystem::path& out,
                        std::ostream& status) {
    PureState phi = load_state_file(in);
    PureState decoded = dfs::decode(phi);
    write_state_file(out, decoded);
    status << "decoded " << phi.num_qubits() << " -> " << decoded.num_qubits()
           << " qubits, wrote " << out.string() << "\n";
}

} // namespace dephasim::cli
