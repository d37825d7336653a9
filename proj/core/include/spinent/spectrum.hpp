// Exact diagonalization with (s, k) labels, partition function and thermal state.

#pragma once

#include "spinent/model.hpp"
#include "spinent/operators.hpp"

#include <optional>
#include <vector>

namespace spinent {

struct SectorLabel {
    int s = 0;                ///< eigenvalue of S^z (sum of +-1)
    std::optional<int> k;     ///< T(1) eigenvalue exp(-2 pi i k / N); translation-invariant specs only
};

class SpectrumResult {
public:
    SpectrumResult(int n_qubits, double energy_unit, Eigen::VectorXd energies, Matrix vectors,
                   std::vector<SectorLabel> labels);

    int n_qubits() const { return n_qubits_; }
    std::size_t size() const { return static_cast<std::size_t>(energies_.size()); }
    /// Coupling J used for zeta = exp(beta J).
    double energy_unit() const { return energy_unit_; }

    /// Ascending; ties ordered by (s, k).
    const Eigen::VectorXd& energies() const { return energies_; }
    double energy(std::size_t j) const { return energies_(static_cast<Eigen::Index>(j)); }
    const SectorLabel& label(std::size_t j) const { return labels_[j]; }
    const std::vector<SectorLabel>& labels() const { return labels_; }
    /// Columns are the eigenvectors.
    const Matrix& vectors() const { return vectors_; }
    PureState state(std::size_t j) const;

    /// max_j ||H v_j - E_j v_j||_inf.
    double max_residual(const DenseOperator& h) const;
    /// max-entry deviation of V^dagger V from the identity.
    double orthonormality_error() const;

private:
    int n_qubits_;
    double energy_unit_;
    Eigen::VectorXd energies_;
    Matrix vectors_;
    std::vector<SectorLabel> labels_;
};

/// Full eigendecomposition. Degenerate blocks (relative gap 1e-9) are re-mixed
/// into simultaneous eigenvectors of S^z and, when the spec is translation
/// invariant, T(1). In the s = 0 sector of a zero-field spec, remaining ties
/// are split by the spinflip parity. Each vector's largest amplitude is made
/// real positive.
SpectrumResult diagonalize(const ModelSpec& spec);

/// Eigenvalues only, ascending.
Eigen::VectorXd eigenvalues(const ModelSpec& spec);

struct ThermalContext {
    double beta = 0.0;
    double temperature = 0.0;  ///< 1/beta, infinity at beta = 0
    double z = 0.0;            ///< may overflow to infinity for large beta; log_z is always finite
    double log_z = 0.0;
    double zeta = 1.0;         ///< exp(beta J)
    double ground_energy = 0.0;
};

ThermalContext partition_function(const SpectrumResult& spectrum, double beta);
/// log Z from a bare list of energies (log-sum-exp).
double log_partition_function(const Eigen::VectorXd& energies, double beta);

/// Boltzmann weights exp(-beta E_j)/Z, computed relative to the ground energy.
Eigen::VectorXd thermal_weights(const Eigen::VectorXd& energies, double beta);

DensityMatrix thermal_state(const SpectrumResult& spectrum, double beta);
/// Mixture restricted to the eigenstates with S^z eigenvalue `s`.
DensityMatrix thermal_state_in_sector(const SpectrumResult& spectrum, double beta, int s);

}  // namespace spinent
