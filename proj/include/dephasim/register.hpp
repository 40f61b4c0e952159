// register.hpp — L-qubit states and density operators in the product operator
// basis rho_{i,j} with per-qubit labels i, j in {+1, -1}.
//
// Label convention (shared by every module): label i denotes the sigma_z
// eigenvalue -i, so that sigma_z rho_{i,j} = -i rho_{i,j} holds literally.
// Single-qubit basis elements, in the sigma_z = +1-first matrix ordering:
//
//   rho_{-1,-1} = (I + sigma_z)/2      rho_{-1,+1} = sigma_plus
//   rho_{+1,+1} = (I - sigma_z)/2      rho_{+1,-1} = sigma_minus
//
// so rho_{i,j} is the matrix unit |bit(i)><bit(j)| with bit(+1) = 1,
// bit(-1) = 0. Configuration indices pack one bit per qubit (label +1 ->
// bit 1), qubit 1 most significant. Coefficient tensors interleave the i and
// j bits per qubit (i above j), giving a deterministic flat layout.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <cstdint>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dephasim/detail/bits.hpp"
#include "dephasim/detail/summation.hpp"
#include "dephasim/errors.hpp"

namespace dephasim {

using Complex = std::complex<double>;
using config_index = std::uint64_t;

inline constexpr int kMaxQubits = 64;        // configuration index width
inline constexpr int kMaxTensorQubits = 12;  // 4^L coefficient tensors
inline constexpr int kMaxDenseQubits = 6;    // 2^L x 2^L dense matrices
inline constexpr double kStateTol = 1e-12;

// An assignment of labels {i_l} to the register, qubit 1 first.
class Configuration {
public:
    explicit Configuration(std::vector<int> labels) : labels_(std::move(labels)) {
        if (labels_.empty() || static_cast<int>(labels_.size()) > kMaxQubits) {
            throw ValidationError("configuration must have between 1 and 64 labels");
        }
        for (int v : labels_) {
            if (v != 1 && v != -1) {
                throw ValidationError("configuration labels must be +1 or -1");
            }
        }
    }

    static Configuration from_index(int num_qubits, config_index index) {
        if (num_qubits < 1 || num_qubits > kMaxQubits) {
            throw ValidationError("configuration must have between 1 and 64 labels");
        }
        std::vector<int> labels(static_cast<std::size_t>(num_qubits));
        for (int l = 0; l < num_qubits; ++l) {
            labels[static_cast<std::size_t>(l)] =
                (index >> (num_qubits - 1 - l)) & 1ULL ? 1 : -1;
        }
        return Configuration(std::move(labels));
    }

    // Parses strings like "+-+" (ASCII '-' or UTF-8 U+2212 accepted).
    static Configuration parse(std::string_view text) {
        std::vector<int> labels;
        for (std::size_t p = 0; p < text.size();) {
            char c = text[p];
            if (c == '+') {
                labels.push_back(1);
                ++p;
            } else if (c == '-') {
                labels.push_back(-1);
                ++p;
            } else if (p + 2 < text.size() && static_cast<unsigned char>(c) == 0xE2 &&
                       static_cast<unsigned char>(text[p + 1]) == 0x88 &&
                       static_cast<unsigned char>(text[p + 2]) == 0x92) {
                labels.push_back(-1);
                p += 3;
            } else {
                throw ValidationError("configuration string must consist of '+' and '-'");
            }
        }
        return Configuration(std::move(labels));
    }

    int num_qubits() const { return static_cast<int>(labels_.size()); }

    // 1-based, matching "qubit 1 is the most significant position".
    int label(int qubit) const { return labels_.at(static_cast<std::size_t>(qubit - 1)); }

    const std::vector<int>& labels() const { return labels_; }

    config_index index() const {
        config_index idx = 0;
        for (int v : labels_) idx = (idx << 1) | (v > 0 ? 1ULL : 0ULL);
        return idx;
    }

    std::string str() const {
        std::string s;
        s.reserve(labels_.size());
        for (int v : labels_) s.push_back(v > 0 ? '+' : '-');
        return s;
    }

    friend bool operator==(const Configuration& a, const Configuration& b) {
        return a.labels_ == b.labels_;
    }

private:
    std::vector<int> labels_;
};

// Normalized pure state stored as its nonzero support, sorted by
// configuration index. Sparse storage keeps GHZ-like states usable far
// beyond the coefficient-tensor cap.
class PureState {
public:
    struct Term {
        config_index index;
        Complex amplitude;
    };

    PureState(int num_qubits, std::vector<Term> terms) : num_qubits_(num_qubits) {
        if (num_qubits_ < 1 || num_qubits_ > kMaxQubits) {
            throw ValidationError("pure state must have between 1 and 64 qubits");
        }
        const config_index mask = detail::index_mask(num_qubits_);
        for (const Term& t : terms) {
            if (t.index > mask) {
                throw ValidationError("configuration index exceeds the register width");
            }
            if (t.amplitude != Complex(0.0, 0.0)) terms_.push_back(t);
        }
        std::sort(terms_.begin(), terms_.end(),
                  [](const Term& a, const Term& b) { return a.index < b.index; });
        for (std::size_t k = 1; k < terms_.size(); ++k) {
            if (terms_[k].index == terms_[k - 1].index) {
                throw ValidationError("duplicate configuration in state support");
            }
        }
        detail::NeumaierSum norm2;
        for (const Term& t : terms_) norm2.add(std::norm(t.amplitude));
        if (std::abs(norm2.value() - 1.0) > kStateTol) {
            std::ostringstream msg;
            msg << "state is not normalized: sum |amplitude|^2 = " << norm2.value();
            throw ValidationError(msg.str());
        }
    }

    PureState(int num_qubits, const Eigen::VectorXcd& amplitudes)
        : PureState(num_qubits, dense_terms(num_qubits, amplitudes)) {}

    static PureState basis_state(const Configuration& c) {
        return PureState(c.num_qubits(), std::vector<Term>{{c.index(), Complex(1.0, 0.0)}});
    }

    static PureState uniform_superposition(int num_qubits) {
        if (num_qubits < 1 || num_qubits > 20) {
            throw SizeError("uniform superposition limited to 20 qubits");
        }
        const config_index dim = 1ULL << num_qubits;
        const double a = 1.0 / std::sqrt(static_cast<double>(dim));
        std::vector<Term> terms;
        terms.reserve(dim);
        for (config_index k = 0; k < dim; ++k) terms.push_back({k, Complex(a, 0.0)});
        return PureState(num_qubits, std::move(terms));
    }

    // (|+1...+1> + |-1...-1>)/sqrt(2)
    static PureState ghz(int num_qubits) {
        if (num_qubits < 1 || num_qubits > kMaxQubits) {
            throw ValidationError("pure state must have between 1 and 64 qubits");
        }
        const double a = 1.0 / std::sqrt(2.0);
        return PureState(num_qubits,
                         std::vector<Term>{{0, Complex(a, 0.0)},
                                           {detail::index_mask(num_qubits), Complex(a, 0.0)}});
    }

    int num_qubits() const { return num_qubits_; }
    const std::vector<Term>& terms() const { return terms_; }
    std::size_t support_size() const { return terms_.size(); }

    Complex amplitude(config_index index) const {
        auto it = std::lower_bound(
            terms_.begin(), terms_.end(), index,
            [](const Term& t, config_index i) { return t.index < i; });
        if (it != terms_.end() && it->index == index) return it->amplitude;
        return {0.0, 0.0};
    }

private:
    static std::vector<Term> dense_terms(int num_qubits, const Eigen::VectorXcd& amplitudes) {
        if (num_qubits < 1 || num_qubits > 20) {
            throw SizeError("dense amplitude vectors limited to 20 qubits");
        }
        if (amplitudes.size() != (1LL << num_qubits)) {
            throw ValidationError("amplitude vector length must be 2^num_qubits");
        }
        std::vector<Term> terms;
        for (Eigen::Index k = 0; k < amplitudes.size(); ++k) {
            terms.push_back({static_cast<config_index>(k), amplitudes[k]});
        }
        return terms;
    }

    int num_qubits_;
    std::vector<Term> terms_;
};

// Coefficient tensor c_{i,j} of a density (or general) operator in the
// rho_{i,j} basis; dense over all 4^L ordered configuration pairs.
class OperatorCoefficients {
public:
    explicit OperatorCoefficients(int num_qubits) : num_qubits_(num_qubits) {
        if (num_qubits_ < 1 || num_qubits_ > kMaxTensorQubits) {
            throw SizeError("coefficient tensors limited to 12 qubits");
        }
        data_.assign(1ULL << (2 * num_qubits_), Complex(0.0, 0.0));
    }

    int num_qubits() const { return num_qubits_; }
    std::size_t dim() const { return 1ULL << num_qubits_; }

    Complex coeff(config_index i, config_index j) const {
        check_index(i);
        check_index(j);
        return data_[detail::pair_index(i, j)];
    }

    void set_coeff(config_index i, config_index j, Complex v) {
        check_index(i);
        check_index(j);
        data_[detail::pair_index(i, j)] = v;
    }

    Complex trace() const {
        detail::ComplexSum tr;
        for (config_index i = 0; i < dim(); ++i) tr.add(data_[detail::pair_index(i, i)]);
        return tr.value();
    }

    double hermiticity_residual() const {
        double worst = 0.0;
        for (config_index i = 0; i < dim(); ++i) {
            for (config_index j = i; j < dim(); ++j) {
                Complex a = data_[detail::pair_index(i, j)];
                Complex b = data_[detail::pair_index(j, i)];
                worst = std::max(worst, std::abs(a - std::conj(b)));
            }
        }
        return worst;
    }

    bool is_valid_density(double tol = kStateTol) const {
        return hermiticity_residual() <= tol && std::abs(trace() - 1.0) <= tol;
    }

    void validate_density(double tol = kStateTol) const {
        double h = hermiticity_residual();
        if (h > tol) {
            std::ostringstream msg;
            msg << "operator is not Hermitian: residual " << h;
            throw ValidationError(msg.str());
        }
        Complex tr = trace();
        if (std::abs(tr - 1.0) > tol) {
            std::ostringstream msg;
            msg << "operator trace is " << tr.real();
            if (tr.imag() != 0.0) msg << (tr.imag() < 0 ? " - " : " + ") << std::abs(tr.imag()) << "i";
            msg << ", expected 1";
            throw ValidationError(msg.str());
        }
    }

    const std::vector<Complex>& data() const { return data_; }
    std::vector<Complex>& data() { return data_; }

private:
    void check_index(config_index i) const {
        if (i >= dim()) throw ValidationError("configuration index exceeds the register width");
    }

    int num_qubits_;
    std::vector<Complex> data_;
};

// c_{i,j} = a_i conj(a_j); the expansion of |psi><psi|.
inline OperatorCoefficients from_pure_state(const PureState& psi) {
    if (psi.num_qubits() > kMaxTensorQubits) {
        throw SizeError("coefficient tensors limited to 12 qubits");
    }
    OperatorCoefficients rho(psi.num_qubits());
    for (const PureState::Term& ti : psi.terms()) {
        for (const PureState::Term& tj : psi.terms()) {
            rho.set_coeff(ti.index, tj.index, ti.amplitude * std::conj(tj.amplitude));
        }
    }
    return rho;
}

// Dense matrix realization. rho_{i,j} is the matrix unit |bit(i)><bit(j)|, so
// the tensor maps straight onto matrix entries: M(i, j) = c_{i,j}.
inline Eigen::MatrixXcd to_matrix(const OperatorCoefficients& rho) {
    if (rho.num_qubits() > kMaxDenseQubits) {
        throw SizeError("dense matrices limited to 6 qubits");
    }
    const auto d = static_cast<Eigen::Index>(rho.dim());
    Eigen::MatrixXcd m(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
            m(i, j) = rho.coeff(static_cast<config_index>(i), static_cast<config_index>(j));
        }
    }
    return m;
}

// Coefficient extraction; the trace pairing tr(M rho_{j,i}) against the dual
// basis reduces to reading entry (i, j).
inline OperatorCoefficients from_matrix(const Eigen::MatrixXcd& m) {
    if (m.rows() != m.cols() || m.rows() < 2 || (m.rows() & (m.rows() - 1)) != 0) {
        throw ValidationError("matrix dimension must be a power of two >= 2");
    }
    int num_qubits = 0;
    for (Eigen::Index d = m.rows(); d > 1; d >>= 1) ++num_qubits;
    if (num_qubits > kMaxDenseQubits) {
        throw SizeError("dense matrices limited to 6 qubits");
    }
    OperatorCoefficients rho(num_qubits);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            rho.set_coeff(static_cast<config_index>(i), static_cast<config_index>(j), m(i, j));
        }
    }
    return rho;
}

} // namespace dephasim
