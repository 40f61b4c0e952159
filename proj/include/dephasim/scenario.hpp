// scenario.hpp — experiment configuration (flat "key = value" files with
// dotted keys and # comments) and the +/- state-file format.

#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dephasim/bath.hpp"
#include "dephasim/channels.hpp"
#include "dephasim/dfs.hpp"
#include "dephasim/errors.hpp"
#include "dephasim/register.hpp"

namespace dephasim::cli {

class ConfigError : public Error {
public:
    using Error::Error;
};

enum class StateFamily { basis, uniform, ghz, custom, encoded };

struct StateSpec {
    StateFamily family = StateFamily::uniform;
    std::string basis_labels;                      // family = basis
    std::filesystem::path amplitude_file;          // family = custom
    StateFamily inner = StateFamily::uniform;      // family = encoded
    std::string inner_basis_labels;
    std::filesystem::path inner_amplitude_file;
};

struct TimeGrid {
    double start = 0.0;
    double stop = 0.0;
    int count = 0;
    bool log_spacing = false;

    std::vector<double> times() const {
        if (count < 1) throw ValidationError("time grid is empty");
        if (!(start >= 0.0)) throw ValidationError("time grid must start at t >= 0");
        if (count == 1) return {start};
        if (!(stop > start)) throw ValidationError("time grid must be strictly increasing");
        if (log_spacing && !(start > 0.0)) {
            throw ValidationError("log-spaced grids require start > 0");
        }
        std::vector<double> out(static_cast<std::size_t>(count));
        for (int k = 0; k < count; ++k) {
            double f = static_cast<double>(k) / (count - 1);
            out[static_cast<std::size_t>(k)] =
                log_spacing ? start * std::pow(stop / start, f) : start + f * (stop - start);
        }
        return out;
    }
};

struct OracleBlock {
    int fock_cutoff = 0;
    int num_samples = 10000;
    std::uint64_t seed = 1;
    std::optional<double> threshold;  // default depends on vacuum vs thermal
};

struct Scenario {
    int register_size = 0;  // logical size for the encoded family
    StateSpec state;
    channels::ChannelKind kind = channels::ChannelKind::collective;
    bath::BathSpec bath_spec;
    TimeGrid grid;
    std::filesystem::path output_path;
    std::optional<OracleBlock> oracle_block;
    std::map<std::string, std::string> echo;  // resolved keys, for CSV headers
};

namespace detail {

inline std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::optional<double> parse_double_strict(const std::string& s) {
    try {
        std::size_t pos = 0;
        double d = std::stod(s, &pos);
        if (pos != s.size()) return std::nullopt;
        return d;
    } catch (const std::logic_error&) {
        return std::nullopt;
    }
}

inline std::string format17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// write-temp-then-rename so rerunning a scenario replaces output atomically
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write to '" + tmp.string() + "'");
        out << content;
        if (!out.flush()) throw Error("write failed for '" + tmp.string() + "'");
    }
    std::filesystem::rename(tmp, path);
}

struct RawConfig {
    std::map<std::string, std::pair<std::string, int>> entries;  // key -> (value, line)
    std::set<std::string> consumed;
    std::string source;

    [[noreturn]] void fail(const std::string& key, const std::string& what) const {
        std::ostringstream msg;
        msg << source << ": ";
        auto it = entries.find(key);
        if (it != entries.end()) msg << "line " << it->second.second << ": ";
        msg << "key '" << key << "': " << what;
        throw ConfigError(msg.str());
    }

    std::optional<std::string> get(const std::string& key) {
        auto it = entries.find(key);
        if (it == entries.end()) return std::nullopt;
        consumed.insert(key);
        return it->second.first;
    }

    std::string require(const std::string& key) {
        auto v = get(key);
        if (!v) {
            throw ConfigError(source + ": missing required key '" + key + "'");
        }
        return *v;
    }

    double get_double(const std::string& key, std::optional<double> fallback = {}) {
        auto v = get(key);
        if (!v) {
            if (fallback) return *fallback;
            throw ConfigError(source + ": missing required key '" + key + "'");
        }
        auto d = parse_double_strict(*v);
        if (!d) fail(key, "cannot parse '" + *v + "' as a number");
        return *d;
    }

    long long get_int(const std::string& key, std::optional<long long> fallback = {}) {
        auto v = get(key);
        if (!v) {
            if (fallback) return *fallback;
            throw ConfigError(source + ": missing required key '" + key + "'");
        }
        long long out = 0;
        auto [p, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
        if (ec != std::errc() || p != v->data() + v->size()) {
            fail(key, "cannot parse '" + *v + "' as an integer");
        }
        return out;
    }
};

inline RawConfig read_raw_config(std::istream& in, const std::string& source) {
    RawConfig raw;
    raw.source = source;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::string t = trim(line);
        if (t.empty()) continue;
        auto eq = t.find('=');
        if (eq == std::string::npos) {
            std::ostringstream msg;
            msg << source << ": line " << lineno << ": expected 'key = value', got '" << t << "'";
            throw ConfigError(msg.str());
        }
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        if (key.empty()) {
            std::ostringstream msg;
            msg << source << ": line " << lineno << ": empty key";
            throw ConfigError(msg.str());
        }
        if (raw.entries.count(key) != 0) {
            std::ostringstream msg;
            msg << source << ": line " << lineno << ": duplicate key '" << key << "'";
            throw ConfigError(msg.str());
        }
        raw.entries[key] = {value, lineno};
    }
    return raw;
}

inline StateFamily parse_family(RawConfig& raw, const std::string& key, bool allow_encoded) {
    std::string v = raw.require(key);
    if (v == "basis") return StateFamily::basis;
    if (v == "uniform" || v == "uniform-superposition") return StateFamily::uniform;
    if (v == "ghz") return StateFamily::ghz;
    if (v == "custom") return StateFamily::custom;
    if (v == "encoded" && allow_encoded) return StateFamily::encoded;
    raw.fail(key, "unknown state family '" + v + "'");
}

inline std::vector<bath::Mode> parse_modes(RawConfig& raw, const std::string& prefix) {
    std::vector<bath::Mode> modes;
    for (int k = 1;; ++k) {
        std::string kk = prefix + "." + std::to_string(k) + ".kappa";
        std::string ko = prefix + "." + std::to_string(k) + ".omega";
        if (raw.entries.count(kk) == 0 && raw.entries.count(ko) == 0) break;
        modes.push_back({raw.get_double(kk), raw.get_double(ko)});
    }
    return modes;
}

inline std::string family_name(StateFamily f) {
    switch (f) {
        case StateFamily::basis: return "basis";
        case StateFamily::uniform: return "uniform";
        case StateFamily::ghz: return "ghz";
        case StateFamily::custom: return "custom";
        case StateFamily::encoded: return "encoded";
    }
    return "?";
}

} // namespace detail

// Fully resolved key/value view of a scenario, defaults included, so the CSV
// header block pins every input that touches the numeric columns. The output
// path is deliberately absent (it never does).
inline std::map<std::string, std::string> scenario_echo(const Scenario& s) {
    std::map<std::string, std::string> echo;
    echo["register.size"] = std::to_string(s.register_size);
    echo["state.family"] = detail::family_name(s.state.family);
    if (s.state.family == StateFamily::basis) {
        echo["state.basis"] = s.state.basis_labels;
    } else if (s.state.family == StateFamily::custom) {
        echo["state.file"] = s.state.amplitude_file.string();
    } else if (s.state.family == StateFamily::encoded) {
        echo["state.inner"] = detail::family_name(s.state.inner);
        if (s.state.inner == StateFamily::basis) {
            echo["state.inner_basis"] = s.state.inner_basis_labels;
        } else if (s.state.inner == StateFamily::custom) {
            echo["state.inner_file"] = s.state.inner_amplitude_file.string();
        }
    }
    echo["channel.kind"] =
        s.kind == channels::ChannelKind::collective ? "collective" : "independent";
    if (const auto* ohmic = std::get_if<bath::OhmicSpectrum>(&s.bath_spec.spectral)) {
        echo["bath.model"] = "ohmic";
        echo["bath.epsilon"] = detail::format17(ohmic->epsilon);
        echo["bath.omega_c"] = detail::format17(ohmic->omega_c);
        echo["bath.cutoff"] = ohmic->cutoff == bath::Cutoff::hard ? "hard" : "exponential";
    } else {
        const auto& d = std::get<bath::DiscreteSpectrum>(s.bath_spec.spectral);
        echo["bath.model"] = "discrete";
        for (std::size_t k = 0; k < d.modes.size(); ++k) {
            std::string prefix = "bath.mode." + std::to_string(k + 1);
            echo[prefix + ".kappa"] = detail::format17(d.modes[k].kappa);
            echo[prefix + ".omega"] = detail::format17(d.modes[k].omega);
        }
    }
    echo["bath.temperature"] = detail::format17(s.bath_spec.temperature);
    echo["grid.start"] = detail::format17(s.grid.start);
    echo["grid.stop"] = detail::format17(s.grid.stop);
    echo["grid.count"] = std::to_string(s.grid.count);
    echo["grid.spacing"] = s.grid.log_spacing ? "log" : "linear";
    if (s.oracle_block) {
        echo["oracle.fock_cutoff"] = std::to_string(s.oracle_block->fock_cutoff);
        echo["oracle.samples"] = std::to_string(s.oracle_block->num_samples);
        echo["oracle.seed"] = std::to_string(s.oracle_block->seed);
        if (s.oracle_block->threshold) {
            echo["oracle.threshold"] = detail::format17(*s.oracle_block->threshold);
        }
    }
    return echo;
}

inline Scenario parse_scenario(std::istream& in, const std::string& source) {
    detail::RawConfig raw = detail::read_raw_config(in, source);
    Scenario s;

    s.register_size = static_cast<int>(raw.get_int("register.size"));
    if (s.register_size < 1) raw.fail("register.size", "must be >= 1");

    s.state.family = detail::parse_family(raw, "state.family", true);
    if (s.state.family == StateFamily::basis) {
        s.state.basis_labels = raw.require("state.basis");
    } else if (s.state.family == StateFamily::custom) {
        s.state.amplitude_file = raw.require("state.file");
    } else if (s.state.family == StateFamily::encoded) {
        s.state.inner = detail::parse_family(raw, "state.inner", false);
        if (s.state.inner == StateFamily::basis) {
            s.state.inner_basis_labels = raw.require("state.inner_basis");
        } else if (s.state.inner == StateFamily::custom) {
            s.state.inner_amplitude_file = raw.require("state.inner_file");
        }
    }

    std::string kind = raw.get("channel.kind").value_or("collective");
    if (kind == "collective") {
        s.kind = channels::ChannelKind::collective;
    } else if (kind == "independent") {
        s.kind = channels::ChannelKind::independent;
    } else {
        raw.fail("channel.kind", "must be 'collective' or 'independent'");
    }

    std::string model = raw.require("bath.model");
    double temperature = raw.get_double("bath.temperature", 0.0);
    if (model == "ohmic") {
        bath::OhmicSpectrum ohmic;
        ohmic.epsilon = raw.get_double("bath.epsilon");
        ohmic.omega_c = raw.get_double("bath.omega_c");
        std::string cutoff = raw.get("bath.cutoff").value_or("hard");
        if (cutoff == "hard") {
            ohmic.cutoff = bath::Cutoff::hard;
        } else if (cutoff == "exponential") {
            ohmic.cutoff = bath::Cutoff::exponential;
        } else {
            raw.fail("bath.cutoff", "must be 'hard' or 'exponential'");
        }
        s.bath_spec = {ohmic, temperature};
    } else if (model == "discrete") {
        std::vector<bath::Mode> modes = detail::parse_modes(raw, "bath.mode");
        if (modes.empty()) {
            raw.fail("bath.model", "discrete model requires bath.mode.1.{kappa,omega}");
        }
        s.bath_spec = {bath::DiscreteSpectrum{modes}, temperature};
    } else {
        raw.fail("bath.model", "must be 'ohmic' or 'discrete'");
    }
    bath::validate(s.bath_spec);

    s.grid.start = raw.get_double("grid.start");
    s.grid.stop = raw.get_double("grid.stop", s.grid.start);
    s.grid.count = static_cast<int>(raw.get_int("grid.count"));
    if (s.grid.count < 1) raw.fail("grid.count", "time grid is empty");
    std::string spacing = raw.get("grid.spacing").value_or("linear");
    if (spacing == "linear") {
        s.grid.log_spacing = false;
    } else if (spacing == "log") {
        s.grid.log_spacing = true;
    } else {
        raw.fail("grid.spacing", "must be 'linear' or 'log'");
    }
    s.grid.times();  // validates monotonicity and positivity

    if (auto out = raw.get("output.path")) s.output_path = *out;

    bool has_oracle = false;
    for (const auto& [key, _] : raw.entries) {
        if (key.rfind("oracle.", 0) == 0) has_oracle = true;
    }
    if (has_oracle) {
        OracleBlock block;
        block.fock_cutoff = static_cast<int>(raw.get_int("oracle.fock_cutoff"));
        block.num_samples = static_cast<int>(raw.get_int("oracle.samples", 10000));
        block.seed = static_cast<std::uint64_t>(raw.get_int("oracle.seed", 1));
        if (raw.entries.count("oracle.threshold") != 0) {
            block.threshold = raw.get_double("oracle.threshold");
        }
        s.oracle_block = block;
    }

    for (const auto& [key, value] : raw.entries) {
        if (raw.consumed.count(key) == 0) {
            std::ostringstream msg;
            msg << source << ": line " << value.second << ": unknown key '" << key << "'";
            throw ConfigError(msg.str());
        }
    }
    s.echo = scenario_echo(s);
    return s;
}

inline Scenario parse_scenario_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
    return parse_scenario(in, path.filename().string());
}

// --- state files: "configuration, Re, Im" rows -----------------------------

inline PureState load_state_file(const std::filesystem::path& path,
                                 std::ostream& warnings = std::cerr) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open state file '" + path.string() + "'");
    std::vector<PureState::Term> terms;
    int num_qubits = 0;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::string t = detail::trim(line);
        if (t.empty()) continue;
        std::istringstream row(t);
        std::string config_str, re_str, im_str;
        if (!std::getline(row, config_str, ',') || !std::getline(row, re_str, ',') ||
            !std::getline(row, im_str)) {
            std::ostringstream msg;
            msg << path.string() << ": line " << lineno
                << ": expected 'configuration, real, imag'";
            throw ConfigError(msg.str());
        }
        Configuration config = Configuration::parse(detail::trim(config_str));
        if (num_qubits == 0) {
            num_qubits = config.num_qubits();
        } else if (config.num_qubits() != num_qubits) {
            std::ostringstream msg;
            msg << path.string() << ": line " << lineno << ": configuration length "
                << config.num_qubits() << " differs from " << num_qubits;
            throw ConfigError(msg.str());
        }
        auto re = detail::parse_double_strict(detail::trim(re_str));
        auto im = detail::parse_double_strict(detail::trim(im_str));
        if (!re || !im) {
            std::ostringstream msg;
            msg << path.string() << ": line " << lineno << ": cannot parse amplitude";
            throw ConfigError(msg.str());
        }
        terms.push_back({config.index(), {*re, *im}});
    }
    if (terms.empty()) throw ConfigError(path.string() + ": no amplitudes found");

    double norm2 = 0.0;
    for (const auto& t : terms) norm2 += std::norm(t.amplitude);
    if (!(norm2 > 0.0)) throw ValidationError(path.string() + ": state has zero norm");
    double norm = std::sqrt(norm2);
    if (std::abs(norm - 1.0) > 1e-6) {
        warnings << "warning: " << path.string() << ": input norm " << norm
                 << " deviates from 1; normalizing\n";
    }
    for (auto& t : terms) t.amplitude /= norm;
    return PureState(num_qubits, std::move(terms));
}

inline void write_state_file(const std::filesystem::path& path, const PureState& psi) {
    std::ostringstream out;
    out << "# dephasim state, " << psi.num_qubits() << " qubits\n";
    out << "# configuration, Re(amplitude), Im(amplitude)\n";
    for (const PureState::Term& t : psi.terms()) {
        out << Configuration::from_index(psi.num_qubits(), t.index).str() << ", "
            << detail::format17(t.amplitude.real()) << ", "
            << detail::format17(t.amplitude.imag()) << "\n";
    }
    detail::write_file_atomic(path, out.str());
}

// Instantiates the scenario's input state; for the encoded family the inner
// state has register_size qubits and the result 2x that.
inline PureState build_state(const Scenario& s) {
    const int L = s.register_size;
    auto build = [&](StateFamily family, const std::string& basis_labels,
                     const std::filesystem::path& file) -> PureState {
        switch (family) {
            case StateFamily::basis: {
                Configuration c = Configuration::parse(basis_labels);
                if (c.num_qubits() != L) {
                    throw ConfigError("state.basis length does not match register.size");
                }
                return PureState::basis_state(c);
            }
            case StateFamily::uniform:
                return PureState::uniform_superposition(L);
            case StateFamily::ghz:
                return PureState::ghz(L);
            case StateFamily::custom: {
                PureState psi = load_state_file(file);
                if (psi.num_qubits() != L) {
                    throw ConfigError("custom state size does not match register.size");
                }
                return psi;
            }
            default:
                throw ConfigError("nested encoded states are not supported");
        }
    };
    if (s.state.family == StateFamily::encoded) {
        return dfs::encode(
            build(s.state.inner, s.state.inner_basis_labels, s.state.inner_amplitude_file));
    }
    return build(s.state.family, s.state.basis_labels, s.state.amplitude_file);
}

} // namespace dephasim::cli
