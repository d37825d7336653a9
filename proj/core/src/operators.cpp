#include "spinent/operators.hpp"

#include <Eigen/Eigenvalues>

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace spinent {

namespace {

constexpr cplx kI{0.0, 1.0};

void check_site(int site, int n_qubits, const char* what) {
    if (site < 1 || site > n_qubits) {
        throw std::out_of_range(std::string(what) + ": site " + std::to_string(site) +
                                " outside 1.." + std::to_string(n_qubits));
    }
}

std::size_t site_mask(int site, int n_qubits) {
    return std::size_t{1} << (n_qubits - site);
}

void check_keep(std::span<const int> keep, int n_qubits) {
    if (keep.empty()) throw std::invalid_argument("partial_trace: empty site subset");
    int prev = 0;
    for (int s : keep) {
        if (s <= prev) throw std::invalid_argument("partial_trace: sites must be strictly increasing");
        check_site(s, n_qubits, "partial_trace");
        prev = s;
    }
}

// Bit patterns of the full register for every assignment of the kept (resp.
// traced) qubits, with the kept qubits read most-significant-first.
struct SplitIndex {
    std::vector<std::size_t> kept;
    std::vector<std::size_t> traced;
};

SplitIndex split_index(std::span<const int> keep, int n_qubits) {
    std::vector<int> rest;
    for (int s = 1, k = 0; s <= n_qubits; ++s) {
        if (k < static_cast<int>(keep.size()) && keep[k] == s) {
            ++k;
        } else {
            rest.push_back(s);
        }
    }
    auto patterns = [n_qubits](std::span<const int> sites) {
        const std::size_t count = std::size_t{1} << sites.size();
        std::vector<std::size_t> out(count, 0);
        const int width = static_cast<int>(sites.size());
        for (std::size_t a = 0; a < count; ++a) {
            std::size_t full = 0;
            for (int q = 0; q < width; ++q) {
                if ((a >> (width - 1 - q)) & 1U) full |= site_mask(sites[q], n_qubits);
            }
            out[a] = full;
        }
        return out;
    };
    return {patterns(keep), patterns(rest)};
}

}  // namespace

std::size_t hilbert_dim(int n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw std::invalid_argument("qubit count " + std::to_string(n_qubits) + " outside 1.." +
                                    std::to_string(kMaxQubits));
    }
    return std::size_t{1} << n_qubits;
}

// ---------------------------------------------------------------------------
// DenseOperator

DenseOperator::DenseOperator(int n_qubits, Matrix entries)
    : n_qubits_(n_qubits), m_(std::move(entries)) {
    const auto d = static_cast<Eigen::Index>(hilbert_dim(n_qubits));
    if (m_.rows() != d || m_.cols() != d) {
        throw std::invalid_argument("DenseOperator: matrix is not 2^N x 2^N");
    }
}

DenseOperator DenseOperator::identity(int n_qubits) {
    const auto d = static_cast<Eigen::Index>(hilbert_dim(n_qubits));
    return {n_qubits, Matrix::Identity(d, d)};
}

DenseOperator DenseOperator::zero(int n_qubits) {
    const auto d = static_cast<Eigen::Index>(hilbert_dim(n_qubits));
    return {n_qubits, Matrix::Zero(d, d)};
}

bool DenseOperator::is_hermitian(double tol) const {
    return max_entry_distance(m_, m_.adjoint()) <= tol;
}

bool DenseOperator::is_unitary(double tol) const {
    return max_entry_distance(m_.adjoint() * m_, Matrix::Identity(dim(), dim())) <= tol;
}

DenseOperator DenseOperator::adjoint() const { return {n_qubits_, m_.adjoint()}; }

DenseOperator operator*(const DenseOperator& a, const DenseOperator& b) {
    if (a.n_qubits_ != b.n_qubits_) throw std::invalid_argument("operator*: qubit count mismatch");
    return {a.n_qubits_, a.m_ * b.m_};
}

DenseOperator operator+(const DenseOperator& a, const DenseOperator& b) {
    if (a.n_qubits_ != b.n_qubits_) throw std::invalid_argument("operator+: qubit count mismatch");
    return {a.n_qubits_, a.m_ + b.m_};
}

DenseOperator operator-(const DenseOperator& a, const DenseOperator& b) {
    if (a.n_qubits_ != b.n_qubits_) throw std::invalid_argument("operator-: qubit count mismatch");
    return {a.n_qubits_, a.m_ - b.m_};
}

DenseOperator operator*(cplx s, const DenseOperator& a) { return {a.n_qubits_, s * a.m_}; }

double max_entry_distance(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw std::invalid_argument("max_entry_distance: shape mismatch");
    }
    if (a.size() == 0) return 0.0;
    return (a - b).cwiseAbs().maxCoeff();
}

double commutator_norm(const DenseOperator& a, const DenseOperator& b) {
    const Matrix ab = a.matrix() * b.matrix();
    const Matrix ba = b.matrix() * a.matrix();
    return max_entry_distance(ab, ba);
}

// ---------------------------------------------------------------------------
// States

PureState::PureState(int n_qubits, Vector amplitudes) : n_qubits_(n_qubits), v_(std::move(amplitudes)) {
    if (v_.size() != static_cast<Eigen::Index>(hilbert_dim(n_qubits))) {
        throw std::invalid_argument("PureState: amplitude vector length is not 2^N");
    }
    if (std::abs(v_.squaredNorm() - 1.0) > 1e-12) {
        throw std::invalid_argument("PureState: squared norm differs from 1 by more than 1e-12");
    }
}

PureState PureState::normalized(int n_qubits, Vector amplitudes) {
    const double norm = amplitudes.norm();
    if (norm == 0.0) throw std::invalid_argument("PureState: zero vector");
    amplitudes /= norm;
    return {n_qubits, std::move(amplitudes)};
}

PureState PureState::basis(std::string_view bits) {
    const int n = static_cast<int>(bits.size());
    Vector v = Vector::Zero(static_cast<Eigen::Index>(hilbert_dim(n)));
    std::size_t index = 0;
    for (char c : bits) {
        if (c != '0' && c != '1') throw std::invalid_argument("PureState::basis: expected '0'/'1'");
        index = (index << 1) | static_cast<std::size_t>(c == '1');
    }
    v(static_cast<Eigen::Index>(index)) = 1.0;
    return {n, std::move(v)};
}

DensityMatrix::DensityMatrix(int n_qubits, Matrix entries, NoCheck)
    : n_qubits_(n_qubits), m_(std::move(entries)) {
    const auto d = static_cast<Eigen::Index>(hilbert_dim(n_qubits));
    if (m_.rows() != d || m_.cols() != d) {
        throw std::invalid_argument("DensityMatrix: matrix is not 2^N x 2^N");
    }
}

DensityMatrix::DensityMatrix(int n_qubits, Matrix entries)
    : DensityMatrix(n_qubits, std::move(entries), NoCheck{}) {
    if (max_entry_distance(m_, m_.adjoint()) > 1e-12) {
        throw std::invalid_argument("DensityMatrix: not Hermitian within 1e-12");
    }
    if (std::abs(m_.trace() - cplx{1.0, 0.0}) > 1e-12) {
        throw std::invalid_argument("DensityMatrix: trace differs from 1 by more than 1e-12");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(m_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-10) {
        throw std::invalid_argument("DensityMatrix: eigenvalue below -1e-10");
    }
}

DensityMatrix DensityMatrix::trusted(int n_qubits, Matrix entries) {
    return {n_qubits, std::move(entries), NoCheck{}};
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) {
    const Vector& v = psi.amplitudes();
    return trusted(psi.n_qubits(), v * v.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(int n_qubits) {
    const auto d = static_cast<Eigen::Index>(hilbert_dim(n_qubits));
    return trusted(n_qubits, Matrix::Identity(d, d) / static_cast<double>(d));
}

double DensityMatrix::purity() const {
    // Tr(rho^2) = sum |rho_ij|^2 for Hermitian rho.
    return m_.cwiseAbs2().sum();
}

// ---------------------------------------------------------------------------
// Pauli algebra

Eigen::Matrix2cd pauli_matrix(Pauli kind) {
    Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
    switch (kind) {
        case Pauli::x:
            m(0, 1) = 1.0;
            m(1, 0) = 1.0;
            break;
        case Pauli::y:
            // sigma^+ = (sigma^x + i sigma^y)/2 must raise |0> to |1>.
            m(0, 1) = kI;
            m(1, 0) = -kI;
            break;
        case Pauli::z:
            m(0, 0) = -1.0;
            m(1, 1) = 1.0;
            break;
        case Pauli::plus:
            m(1, 0) = 1.0;
            break;
        case Pauli::minus:
            m(0, 1) = 1.0;
            break;
        case Pauli::identity:
            m.setIdentity();
            break;
    }
    return m;
}

DenseOperator pauli(Pauli kind) { return {1, pauli_matrix(kind)}; }

DenseOperator embed(const DenseOperator& op, int site, int n_qubits) {
    if (op.n_qubits() != 1) throw std::invalid_argument("embed: operator must act on one qubit");
    check_site(site, n_qubits, "embed");
    const SiteFactor f{site, op.matrix()};
    return embed_product(std::span(&f, 1), n_qubits);
}

DenseOperator embed_product(std::span<const SiteFactor> factors, int n_qubits) {
    const std::size_t d = hilbert_dim(n_qubits);
    std::size_t touched = 0;
    for (const auto& f : factors) {
        check_site(f.site, n_qubits, "embed_product");
        const std::size_t mask = site_mask(f.site, n_qubits);
        if (touched & mask) throw std::invalid_argument("embed_product: repeated site");
        touched |= mask;
    }
    const std::size_t combos = std::size_t{1} << factors.size();
    Matrix out = Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (std::size_t col = 0; col < d; ++col) {
        for (std::size_t c = 0; c < combos; ++c) {
            std::size_t row = col & ~touched;
            cplx amp{1.0, 0.0};
            for (std::size_t k = 0; k < factors.size(); ++k) {
                const int out_bit = static_cast<int>((c >> k) & 1U);
                const int in_bit = qubit_bit(col, factors[k].site, n_qubits);
                amp *= factors[k].op(out_bit, in_bit);
                if (out_bit) row |= site_mask(factors[k].site, n_qubits);
            }
            if (amp != cplx{}) out(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) += amp;
        }
    }
    return {n_qubits, std::move(out)};
}

cplx expectation(const Matrix& rho, std::span<const SiteFactor> factors, int n_qubits) {
    const std::size_t d = hilbert_dim(n_qubits);
    if (rho.rows() != static_cast<Eigen::Index>(d)) throw std::invalid_argument("expectation: dimension mismatch");
    std::size_t touched = 0;
    for (const auto& f : factors) {
        check_site(f.site, n_qubits, "expectation");
        touched |= site_mask(f.site, n_qubits);
    }
    // Tr(rho O) = sum_{col,row} rho(col,row) O(row,col).
    const std::size_t combos = std::size_t{1} << factors.size();
    cplx acc{};
    for (std::size_t col = 0; col < d; ++col) {
        for (std::size_t c = 0; c < combos; ++c) {
            std::size_t row = col & ~touched;
            cplx amp{1.0, 0.0};
            for (std::size_t k = 0; k < factors.size(); ++k) {
                const int out_bit = static_cast<int>((c >> k) & 1U);
                amp *= factors[k].op(out_bit, qubit_bit(col, factors[k].site, n_qubits));
                if (out_bit) row |= site_mask(factors[k].site, n_qubits);
            }
            if (amp != cplx{}) acc += rho(static_cast<Eigen::Index>(col), static_cast<Eigen::Index>(row)) * amp;
        }
    }
    return acc;
}

cplx expectation(const PureState& psi, std::span<const SiteFactor> factors) {
    const int n_qubits = psi.n_qubits();
    const Vector& v = psi.amplitudes();
    std::size_t touched = 0;
    for (const auto& f : factors) {
        check_site(f.site, n_qubits, "expectation");
        touched |= site_mask(f.site, n_qubits);
    }
    const std::size_t combos = std::size_t{1} << factors.size();
    cplx acc{};
    for (std::size_t col = 0; col < static_cast<std::size_t>(v.size()); ++col) {
        const cplx amp_in = v(static_cast<Eigen::Index>(col));
        if (amp_in == cplx{}) continue;
        for (std::size_t c = 0; c < combos; ++c) {
            std::size_t row = col & ~touched;
            cplx amp{1.0, 0.0};
            for (std::size_t k = 0; k < factors.size(); ++k) {
                const int out_bit = static_cast<int>((c >> k) & 1U);
                amp *= factors[k].op(out_bit, qubit_bit(col, factors[k].site, n_qubits));
                if (out_bit) row |= site_mask(factors[k].site, n_qubits);
            }
            if (amp != cplx{}) acc += std::conj(v(static_cast<Eigen::Index>(row))) * amp * amp_in;
        }
    }
    return acc;
}

DenseOperator kron(const DenseOperator& a, const DenseOperator& b) {
    const int n = a.n_qubits() + b.n_qubits();
    const Eigen::Index db = b.dim();
    Matrix out(a.dim() * db, a.dim() * db);
    for (Eigen::Index i = 0; i < a.dim(); ++i) {
        for (Eigen::Index j = 0; j < a.dim(); ++j) {
            out.block(i * db, j * db, db, db) = a.matrix()(i, j) * b.matrix();
        }
    }
    return {n, std::move(out)};
}

// ---------------------------------------------------------------------------
// Symmetry operators

int sz_of_index(std::size_t index, int n_qubits) {
    const int ones = std::popcount(index);
    return 2 * ones - n_qubits;
}

DenseOperator total_sz(int n_qubits) {
    const std::size_t d = hilbert_dim(n_qubits);
    Matrix m = Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < d; ++i) {
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = sz_of_index(i, n_qubits);
    }
    return {n_qubits, std::move(m)};
}

DenseOperator spinflip(int n_qubits) {
    const std::size_t d = hilbert_dim(n_qubits);
    Matrix m = Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < d; ++i) {
        m(static_cast<Eigen::Index>((d - 1) ^ i), static_cast<Eigen::Index>(i)) = 1.0;
    }
    return {n_qubits, std::move(m)};
}

DenseOperator translation(int n_qubits, int l) {
    const std::size_t d = hilbert_dim(n_qubits);
    const int shift = ((l % n_qubits) + n_qubits) % n_qubits;
    Matrix m = Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < d; ++i) {
        // Moving every qubit one site to the right is a right rotation of the
        // N-bit numeral.
        std::size_t j = i;
        for (int s = 0; s < shift; ++s) {
            j = (j >> 1) | ((j & 1U) << (n_qubits - 1));
        }
        m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = 1.0;
    }
    return {n_qubits, std::move(m)};
}

DenseOperator yang_A(int n_qubits) {
    if (n_qubits % 2 != 0) throw std::invalid_argument("yang_A: requires an even number of qubits");
    std::vector<SiteFactor> factors;
    for (int s = 1; s < n_qubits; s += 2) factors.push_back({s, pauli_matrix(Pauli::z)});
    return embed_product(factors, n_qubits);
}

// ---------------------------------------------------------------------------
// Partial trace

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep) {
    const int n = rho.n_qubits();
    check_keep(keep, n);
    const auto split = split_index(keep, n);
    const auto dk = static_cast<Eigen::Index>(split.kept.size());
    Matrix out = Matrix::Zero(dk, dk);
    const Matrix& m = rho.matrix();
    for (Eigen::Index a = 0; a < dk; ++a) {
        for (Eigen::Index b = 0; b < dk; ++b) {
            cplx acc{};
            for (std::size_t t : split.traced) {
                acc += m(static_cast<Eigen::Index>(split.kept[a] | t), static_cast<Eigen::Index>(split.kept[b] | t));
            }
            out(a, b) = acc;
        }
    }
    return DensityMatrix::trusted(static_cast<int>(keep.size()), std::move(out));
}

DensityMatrix partial_trace(const PureState& psi, std::span<const int> keep) {
    const int n = psi.n_qubits();
    check_keep(keep, n);
    const auto split = split_index(keep, n);
    const auto dk = static_cast<Eigen::Index>(split.kept.size());
    const auto dt = static_cast<Eigen::Index>(split.traced.size());
    Matrix psi_mat(dk, dt);
    for (Eigen::Index a = 0; a < dk; ++a) {
        for (Eigen::Index t = 0; t < dt; ++t) {
            psi_mat(a, t) = psi.amplitudes()(static_cast<Eigen::Index>(split.kept[a] | split.traced[t]));
        }
    }
    return DensityMatrix::trusted(static_cast<int>(keep.size()), psi_mat * psi_mat.adjoint());
}

}  // namespace spinent
