// Dense operator algebra on N-qubit Hilbert spaces.
//
// Basis convention: index i in [0, 2^N) stores qubit n (1-based) in bit (N - n),
// so the ket |b_1 b_2 ... b_N> reads as a base-2 numeral with qubit 1 leftmost.
// |0> and |1> are the sigma^z eigenstates with eigenvalues -1 and +1.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace spinent {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr int kMaxQubits = 12;

/// Number of basis states for n qubits; throws for n outside [1, kMaxQubits].
std::size_t hilbert_dim(int n_qubits);

/// Value of qubit `site` (1-based) in basis index `index`.
inline int qubit_bit(std::size_t index, int site, int n_qubits) {
    return static_cast<int>((index >> (n_qubits - site)) & 1U);
}

class DenseOperator {
public:
    DenseOperator(int n_qubits, Matrix entries);

    static DenseOperator identity(int n_qubits);
    static DenseOperator zero(int n_qubits);

    int n_qubits() const { return n_qubits_; }
    Eigen::Index dim() const { return m_.rows(); }
    const Matrix& matrix() const { return m_; }

    bool is_hermitian(double tol = 1e-12) const;
    bool is_unitary(double tol = 1e-12) const;

    DenseOperator adjoint() const;

    friend DenseOperator operator*(const DenseOperator& a, const DenseOperator& b);
    friend DenseOperator operator+(const DenseOperator& a, const DenseOperator& b);
    friend DenseOperator operator-(const DenseOperator& a, const DenseOperator& b);
    friend DenseOperator operator*(cplx s, const DenseOperator& a);

private:
    int n_qubits_;
    Matrix m_;
};

/// Largest absolute entry of a - b.
double max_entry_distance(const Matrix& a, const Matrix& b);
/// Largest absolute entry of the commutator [a, b].
double commutator_norm(const DenseOperator& a, const DenseOperator& b);

class PureState {
public:
    /// Throws std::invalid_argument unless the squared norm is 1 within 1e-12.
    PureState(int n_qubits, Vector amplitudes);

    /// Normalizes first; throws if the vector is zero.
    static PureState normalized(int n_qubits, Vector amplitudes);
    /// Computational basis ket from a string of '0'/'1' characters.
    static PureState basis(std::string_view bits);

    int n_qubits() const { return n_qubits_; }
    const Vector& amplitudes() const { return v_; }

private:
    int n_qubits_;
    Vector v_;
};

class DensityMatrix {
public:
    /// Validates Hermiticity, unit trace (1e-12) and eigenvalues >= -1e-10.
    DensityMatrix(int n_qubits, Matrix entries);

    /// Skips the positivity check. Only for constructions that are PSD by
    /// construction (convex mixtures of projectors, partial traces).
    static DensityMatrix trusted(int n_qubits, Matrix entries);

    static DensityMatrix from_pure(const PureState& psi);
    static DensityMatrix maximally_mixed(int n_qubits);

    int n_qubits() const { return n_qubits_; }
    Eigen::Index dim() const { return m_.rows(); }
    const Matrix& matrix() const { return m_; }

    double purity() const;

private:
    struct NoCheck {};
    DensityMatrix(int n_qubits, Matrix entries, NoCheck);

    int n_qubits_;
    Matrix m_;
};

enum class Pauli { x, y, z, plus, minus, identity };

/// 2x2 single-qubit operator in the (|0>, |1>) basis; sigma^z = diag(-1, +1).
DenseOperator pauli(Pauli kind);
Eigen::Matrix2cd pauli_matrix(Pauli kind);

/// Single-qubit operator acting on `site` (1-based) of an n-qubit register.
DenseOperator embed(const DenseOperator& op, int site, int n_qubits);

/// One factor of a site-local operator product.
struct SiteFactor {
    int site;
    Eigen::Matrix2cd op;
};

/// Matrix of the product of site-local factors (sites must be distinct).
DenseOperator embed_product(std::span<const SiteFactor> factors, int n_qubits);

/// Tr(rho * prod_k factors_k) without forming the full operator.
cplx expectation(const Matrix& rho, std::span<const SiteFactor> factors, int n_qubits);
/// <psi| prod_k factors_k |psi>.
cplx expectation(const PureState& psi, std::span<const SiteFactor> factors);

DenseOperator kron(const DenseOperator& a, const DenseOperator& b);

DenseOperator total_sz(int n_qubits);
DenseOperator spinflip(int n_qubits);
/// Cyclic shift by `l` sites: T(1)|b_1 ... b_N> = |b_N b_1 ... b_{N-1}>.
DenseOperator translation(int n_qubits, int l = 1);
/// Tensor product of sigma^z on the odd sites 1, 3, ..., N-1 (N even).
DenseOperator yang_A(int n_qubits);

/// Eigenvalue of total_sz on a basis index.
int sz_of_index(std::size_t index, int n_qubits);

/// Reduced density matrix on `keep` (strictly increasing, 1-based), preserving
/// site order.
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep);
/// Same, taken directly from the state vector.
DensityMatrix partial_trace(const PureState& psi, std::span<const int> keep);

}  // namespace spinent
