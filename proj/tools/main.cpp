// dephasim command-line tool: config-driven dephasing sweeps, DFS queries,
// pair-code encode/decode, and oracle verification.
//
// Exit codes: 0 success, 1 verification failure, 2 usage/config error,
// 3 numerical error.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "dephasim/cli.hpp"
#include "dephasim/dephasim.hpp"
#include "dephasim/scenario.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

int classify(const std::exception& e) {
    if (dynamic_cast<const dephasim::NumericalError*>(&e) != nullptr ||
        dynamic_cast<const dephasim::DecodeError*>(&e) != nullptr) {
        return kExitNumerical;
    }
    if (dynamic_cast<const dephasim::Error*>(&e) != nullptr) return kExitUsage;
    return kExitNumerical;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"dephasim: collective and independent qubit dephasing simulator"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(dephasim::kVersion));

    std::string config_path;
    std::string state_in;
    std::string state_out;
    std::optional<std::string> output_override;
    std::optional<double> threshold_override;
    std::optional<std::uint64_t> seed_override;
    int dfs_qubits = 1;

    CLI::App* run = app.add_subcommand("run", "sweep a time grid and write a CSV curve");
    run->add_option("config", config_path, "scenario config file")->required();
    run->add_option("--output", output_override, "override output.path");

    CLI::App* dfs = app.add_subcommand("dfs-info", "sector dimensions and pair-code efficiency");
    dfs->add_option("L", dfs_qubits, "number of logical qubits")->required();

    CLI::App* verify = app.add_subcommand("verify", "compare the closed form against the oracle");
    verify->add_option("config", config_path, "scenario config file with an oracle block")
        ->required();
    verify->add_option("--output", output_override, "override output.path");
    verify->add_option("--threshold", threshold_override,
                       "pass threshold (absolute deviation, or sigma units when thermal)");
    verify->add_option("--seed", seed_override, "override oracle.seed");

    CLI::App* encode = app.add_subcommand("encode", "pair-encode a state file");
    encode->add_option("state-file", state_in, "input state file")->required();
    encode->add_option("out-file", state_out, "output state file")->required();
    encode->add_option("--output", output_override, "alias for the output file");

    CLI::App* decode = app.add_subcommand("decode", "decode a pair-encoded state file");
    decode->add_option("state-file", state_in, "input state file")->required();
    decode->add_option("out-file", state_out, "output state file")->required();
    decode->add_option("--output", output_override, "alias for the output file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (run->parsed()) {
            dephasim::cli::Scenario s = dephasim::cli::parse_scenario_file(config_path);
            if (output_override) s.output_path = *output_override;
            dephasim::cli::run_scenario(s, std::cout);
            return kExitOk;
        }
        if (dfs->parsed()) {
            dephasim::cli::dfs_info(dfs_qubits, std::cout);
            return kExitOk;
        }
        if (verify->parsed()) {
            dephasim::cli::Scenario s = dephasim::cli::parse_scenario_file(config_path);
            if (output_override) s.output_path = *output_override;
            dephasim::cli::VerifyOutcome outcome = dephasim::cli::verify_scenario(
                s, threshold_override, seed_override, std::cout);
            return outcome.passed ? kExitOk : kExitVerifyFailed;
        }
        if (encode->parsed()) {
            dephasim::cli::encode_file(state_in, output_override.value_or(state_out), std::cout);
            return kExitOk;
        }
        if (decode->parsed()) {
            dephasim::cli::decode_file(state_in, output_override.value_or(state_out), std::cout);
            return kExitOk;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return classify(e);
    }
    return kExitUsage;
}
