// Entanglement measures: concurrence (general and correlation-function form),
// i-concurrence, 3-tangle, and the entanglement conditions.

#pragma once

#include "spinent/correlations.hpp"
#include "spinent/operators.hpp"

#include <array>
#include <optional>
#include <vector>

namespace spinent {

struct ConcurrenceResult {
    double c = 0.0;        ///< max(0, c_tilde)
    double c_tilde = 0.0;  ///< 2 lambda_max - sum(lambda)
    std::array<double, 4> lambdas{};  ///< descending
    // Correlation-function route only.
    double xi_plus = 0.0;
    double xi_minus = 0.0;
    int case_index = 0;  ///< 1..4, 0 for the general route
};

/// Wootters concurrence. The lambda_i (square roots of the eigenvalues of
/// rho (sy x sy) rho* (sy x sy)) are obtained as singular values, so they stay
/// accurate near zero. Eigenvalues of rho in [-1e-10, 0) clamp to zero;
/// anything lower throws.
ConcurrenceResult concurrence_wootters(const DensityMatrix& rho);

/// Closed form in terms of K^z_n, K^z_m, K^zz_nm and |K^{+-}_nm|. Throws
/// SymmetryViolation when the correlations carry off-block weight.
ConcurrenceResult concurrence_closed_form(const CorrelationSet& cs);

struct ConditionPair {
    bool necessary = false;
    bool sufficient = false;
};

struct EntanglementConditions {
    bool necessary = false;   ///< K^zz - K^z_n K^z_m < 0
    bool sufficient = false;  ///< necessary and xi+ < 4 |K^{+-}|
    /// Populated when K^z_n = K^z_m = 0 within 1e-10.
    std::optional<ConditionPair> f_symmetric;
};

EntanglementConditions entanglement_conditions(const CorrelationSet& cs);

struct IConcurrenceResult {
    double value = 0.0;
    int d_a = 0;
    int d_b = 0;
    int d = 0;
    double upper_bound = 0.0;  ///< sqrt(2 (d - 1) / d)
    /// Value recomputed from expectation values (|A| = 1 always, |A| = 2 when
    /// the pair reduction has S^z structure).
    std::optional<double> from_correlations;
};

/// i-concurrence of subsystem A (1-based sites) against the rest.
IConcurrenceResult iconcurrence(const PureState& state, std::span<const int> subset_a);
/// Same, for a density matrix that must be pure (Tr rho^2 >= 1 - 1e-8).
IConcurrenceResult iconcurrence(const DensityMatrix& rho, std::span<const int> subset_a);

/// sqrt(1 - (K^z)^2 - 4 K^+ K^-).
double iconcurrence_single(const SiteExpectation& e);
/// sqrt(3/2 - [(K^zz)^2 + (K^z_n)^2 + (K^z_m)^2]/2 - 4 |K^{+-}|^2).
double iconcurrence_pair(const CorrelationSet& cs);

struct TangleResult {
    double tau = 0.0;
    double c_1_23_sq = 0.0;  ///< 4 det(rho_central)
    double c_12_sq = 0.0;
    double c_13_sq = 0.0;
};

/// 3-tangle of a pure 3-qubit state with `central` (1..3) as the first qubit.
TangleResult three_tangle(const PureState& state, int central = 1);
/// Same for a 3-qubit density matrix that must be pure.
TangleResult three_tangle(const DensityMatrix& rho, int central = 1);

/// Purity threshold used to accept density matrices as pure.
inline constexpr double kPurityTolerance = 1e-8;

}  // namespace spinent
