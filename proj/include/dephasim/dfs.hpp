// dfs.hpp — coherence-preserving sectors A_m = {configurations with
// sum_l i_l = m}, the two-qubit pair code |+1> -> |+1,-1>, |-1> -> |-1,+1>,
// and a minimal NOT/CNOT basis-permutation simulator.

#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <sstream>
#include <vector>

#include "dephasim/detail/bits.hpp"
#include "dephasim/errors.hpp"
#include "dephasim/register.hpp"

namespace dephasim::dfs {

using BigInt = boost::multiprecision::cpp_int;

// Sector label m of an L-qubit register; |m| <= L with m = L (mod 2).
struct Sector {
    int num_qubits;
    int m;

    void validate() const {
        if (num_qubits < 1 || num_qubits > kMaxQubits) {
            throw ValidationError("sector register size out of range");
        }
        if (std::abs(m) > num_qubits || ((num_qubits - m) % 2) != 0) {
            throw ValidationError("sector label must satisfy |m| <= L and m = L (mod 2)");
        }
    }
};

// One logical qubit per pair of physical qubits.
struct PairCode {
    int logical_qubits;

    int physical_qubits() const { return 2 * logical_qubits; }
};

inline int sector_sum(const Configuration& config) {
    int s = 0;
    for (int v : config.labels()) s += v;
    return s;
}

// Engaged with the common sector sum m when every configuration carrying
// amplitude above tol lies in one A_m; disengaged otherwise.
inline std::optional<int> is_coherence_preserving(const PureState& psi, double tol = 1e-12) {
    std::optional<int> m;
    for (const PureState::Term& t : psi.terms()) {
        if (std::abs(t.amplitude) <= tol) continue;
        int s = dephasim::detail::label_sum(t.index, psi.num_qubits());
        if (!m) {
            m = s;
        } else if (*m != s) {
            return std::nullopt;
        }
    }
    return m;
}

// Number of L-label configurations summing to m: binomial(L, (L+m)/2), or 0
// when the parity constraint fails. Exact integer arithmetic.
inline BigInt sector_dimension(int L, int m) {
    if (L < 1) throw ValidationError("sector_dimension requires L >= 1");
    if (std::abs(m) > L || ((L - m) % 2) != 0) return 0;
    const int k = (L + m) / 2;
    BigInt result = 1;
    for (int i = 1; i <= k; ++i) {
        result = result * (L - k + i) / i;
    }
    return result;
}

namespace detail {

// log2 of a positive big integer, accurate to ~1 ulp of double.
inline double log2_big(const BigInt& v) {
    const int bits = static_cast<int>(boost::multiprecision::msb(v));
    if (bits <= 62) return std::log2(v.convert_to<double>());
    const int shift = bits - 62;
    BigInt top = v >> shift;
    return static_cast<double>(shift) + std::log2(top.convert_to<double>());
}

} // namespace detail

struct Efficiency {
    double exact;
    double approximate;
};

// Rate of the S_0 scheme on 2L qubits:
//   exact = log2 binomial(2L, L) / (2L),
//   approximate = 1 - log2(pi L) / (4L)   (large-L form).
inline Efficiency efficiency(int L) {
    if (L < 1) throw ValidationError("efficiency requires L >= 1");
    const BigInt dim = sector_dimension(2 * L, 0);
    const double exact = detail::log2_big(dim) / (2.0 * L);
    const double approximate = 1.0 - std::log2(std::numbers::pi * L) / (4.0 * L);
    return {exact, approximate};
}

// All configuration indices of the sector A_m, ascending. Enumeration only;
// intended for small registers.
inline std::vector<config_index> sector_configurations(int L, int m) {
    if (L < 1 || L > 20) throw SizeError("sector enumeration limited to 20 qubits");
    std::vector<config_index> out;
    if (std::abs(m) > L || ((L - m) % 2) != 0) return out;
    const config_index dim = 1ULL << L;
    for (config_index c = 0; c < dim; ++c) {
        if (dephasim::detail::label_sum(c, L) == m) out.push_back(c);
    }
    return out;
}

namespace detail {

inline config_index encode_index(config_index logical, int L) {
    config_index phys = 0;
    for (int l = 1; l <= L; ++l) {
        const config_index b = (logical >> (L - l)) & 1ULL;
        phys = (phys << 2) | (b << 1) | (b ^ 1ULL);
    }
    return phys;
}

} // namespace detail

// Pair encoding by linearity: each logical configuration {i_l} maps to
// (i_1, -i_1, i_2, -i_2, ...); every image lies in A_0 of the 2L register.
inline PureState encode(const PureState& psi) {
    const int L = psi.num_qubits();
    if (2 * L > kMaxQubits) {
        throw SizeError("encoded register would exceed 64 physical qubits");
    }
    std::vector<PureState::Term> terms;
    terms.reserve(psi.terms().size());
    for (const PureState::Term& t : psi.terms()) {
        terms.push_back({detail::encode_index(t.index, L), t.amplitude});
    }
    return PureState(2 * L, std::move(terms));
}

// Inverse of encode on its image. Support outside the (i, -i) pair pattern
// is leakage; beyond tol it raises DecodeError reporting the leaked weight.
inline PureState decode(const PureState& phi, double tol = 1e-10) {
    const int P = phi.num_qubits();
    if (P % 2 != 0) throw ValidationError("decode requires an even number of qubits");
    const int L = P / 2;
    std::vector<PureState::Term> terms;
    double leaked = 0.0;
    for (const PureState::Term& t : phi.terms()) {
        config_index logical = 0;
        bool in_image = true;
        for (int l = 1; l <= L; ++l) {
            const config_index hi = (t.index >> (P - 2 * l + 1)) & 1ULL;
            const config_index lo = (t.index >> (P - 2 * l)) & 1ULL;
            if (lo != (hi ^ 1ULL)) {
                in_image = false;
                break;
            }
            logical = (logical << 1) | hi;
        }
        if (in_image) {
            terms.push_back({logical, t.amplitude});
        } else {
            leaked += std::norm(t.amplitude);
        }
    }
    if (leaked > tol) {
        std::ostringstream msg;
        msg << "state leaks weight " << leaked << " outside the pair-code image";
        throw DecodeError(msg.str(), leaked);
    }
    if (leaked > 0.0) {
        // drop the sub-tolerance leakage and renormalize
        double norm = std::sqrt(1.0 - leaked);
        for (auto& t : terms) t.amplitude /= norm;
    }
    return PureState(L, std::move(terms));
}

enum class GateKind { Not, Cnot };

struct Gate {
    GateKind kind;
    int target;       // 1-based physical qubit
    int control = 0;  // used by Cnot only

    static Gate negate(int target) { return {GateKind::Not, target, 0}; }
    static Gate cnot(int control, int target) { return {GateKind::Cnot, target, control}; }
};

// Both gate kinds are involutions, so the reversed circuit is the inverse.
struct GateCircuit {
    int num_qubits;
    std::vector<Gate> gates;
};

// Basis-permutation simulator. NOT flips the target label; CNOT flips the
// target label iff the control label is -1 (truth table (c,t) -> (c,t'):
// (+1,+1)->(+1,+1), (+1,-1)->(+1,-1), (-1,+1)->(-1,-1), (-1,-1)->(-1,+1)).
inline PureState apply_circuit(const GateCircuit& circuit, const PureState& psi) {
    const int L = psi.num_qubits();
    if (circuit.num_qubits != L) {
        throw ValidationError("circuit register size does not match the state");
    }
    for (const Gate& g : circuit.gates) {
        if (g.target < 1 || g.target > L ||
            (g.kind == GateKind::Cnot &&
             (g.control < 1 || g.control > L || g.control == g.target))) {
            throw ValidationError("gate indices out of range");
        }
    }
    std::vector<PureState::Term> terms = psi.terms();
    for (auto& t : terms) {
        config_index idx = t.index;
        for (const Gate& g : circuit.gates) {
            const config_index target_bit = 1ULL << (L - g.target);
            if (g.kind == GateKind::Not) {
                idx ^= target_bit;
            } else {
                const bool control_minus = ((idx >> (L - g.control)) & 1ULL) == 0;
                if (control_minus) idx ^= target_bit;
            }
        }
        t.index = idx;
    }
    return PureState(L, std::move(terms));
}

// Circuit realizing encode: data qubit l sits at physical 2l-1, its ancilla
// (prepared in label -1) at 2l; one CNOT per pair copies the negated label.
inline GateCircuit encoding_circuit(int logical_qubits) {
    if (logical_qubits < 1 || 2 * logical_qubits > kMaxQubits) {
        throw ValidationError("encoding circuit requires 1 <= L <= 32");
    }
    GateCircuit c{2 * logical_qubits, {}};
    for (int l = 1; l <= logical_qubits; ++l) {
        c.gates.push_back(Gate::cnot(2 * l - 1, 2 * l));
    }
    return c;
}

// Spreads psi over the data positions and prepares each ancilla in -1,
// i.e. the input layout expected by encoding_circuit.
inline PureState interleave_with_ancillas(const PureState& psi) {
    const int L = psi.num_qubits();
    if (2 * L > kMaxQubits) {
        throw SizeError("encoded register would exceed 64 physical qubits");
    }
    std::vector<PureState::Term> terms;
    terms.reserve(psi.terms().size());
    for (const PureState::Term& t : psi.terms()) {
        config_index phys = 0;
        for (int l = 1; l <= L; ++l) {
            const config_index b = (t.index >> (L - l)) & 1ULL;
            phys = (phys << 2) | (b << 1);
        }
        terms.push_back({phys, t.amplitude});
    }
    return PureState(2 * L, std::move(terms));
}

} // namespace dephasim::dfs
