// Spin expectation values K and two-site correlation functions, the reduced
// density matrices rebuilt from them, and the partition-function routes.

#pragma once

#include "spinent/model.hpp"
#include "spinent/operators.hpp"
#include "spinent/spectrum.hpp"

#include <stdexcept>

namespace spinent {

/// Expectation values for a site pair (n, m), n < m.
///
/// K^-_n, K^{-+}_nm etc. are the complex conjugates of the stored "+"
/// versions. The off-block correlators vanish whenever the state commutes
/// with S^z.
struct CorrelationSet {
    int n = 1;
    int m = 2;

    double kz_n = 0.0;
    double kz_m = 0.0;
    cplx kplus_n{};
    cplx kplus_m{};
    double kzz = 0.0;
    cplx kpm{};  ///< K^{+-}_nm = <s+_n s-_m>
    double kxx = 0.0;
    double kyy = 0.0;

    // Correlators that connect different S^z sectors.
    cplx kzplus{};     ///< <sz_n s+_m>
    cplx kplusz{};     ///< <s+_n sz_m>
    cplx kplusplus{};  ///< <s+_n s+_m>

    cplx kminus_n() const { return std::conj(kplus_n); }
    cplx kminus_m() const { return std::conj(kplus_m); }
    cplx kmp() const { return std::conj(kpm); }

    /// Largest |coefficient| of the reduced 2-qubit matrix outside the S^z blocks.
    double off_block_magnitude() const;
};

/// Raised when a closed form needs S^z structure the input does not have.
class SymmetryViolation : public std::invalid_argument {
public:
    SymmetryViolation(const std::string& what, double magnitude)
        : std::invalid_argument(what), magnitude_(magnitude) {}
    double magnitude() const { return magnitude_; }

private:
    double magnitude_;
};

inline constexpr double kOffBlockTolerance = 1e-10;

/// Every K is a trace against the embedded operator product.
CorrelationSet correlations(const DensityMatrix& rho, int n, int m);

/// Single-site expectation values (K^z_n, K^+_n).
struct SiteExpectation {
    double kz = 0.0;
    cplx kplus{};
};
SiteExpectation site_expectation(const DensityMatrix& rho, int n);
SiteExpectation site_expectation(const PureState& psi, int n);

/// One-qubit density matrix from (K^z, K^+); valid for any state.
DensityMatrix rdm1_from_expectation(const SiteExpectation& e);

/// Two-qubit density matrix with S^z structure. Throws SymmetryViolation when
/// the off-block coefficients exceed kOffBlockTolerance.
DensityMatrix rdm2_from_correlations(const CorrelationSet& cs);

/// Multi-site <sz_{m1} ... sz_{mk}>.
double zstring_expectation(const DensityMatrix& rho, std::span<const int> sites);

struct NearestNeighbour {
    double kzz = 0.0;
    double kpm = 0.0;
};

/// K^zz_{n(n+1)} and K^{+-}_{n(n+1)} as finite-difference derivatives of
/// ln Z with respect to Delta and J (central differences, exact Z at every
/// stencil point).
NearestNeighbour nn_correlations_from_lnZ(const ModelSpec& spec, double beta, double step = 1e-5);

/// Closed-form thermal quantities of the homogeneous N = 4 ring.
struct ClosedFormN4 {
    double mu1 = 0.0;
    double mu2 = 0.0;
    double z = 0.0;
    double log_z = 0.0;
    double kzz_nn = 0.0;
    double kpm_nn = 0.0;
    double c_nn = 0.0;
    double kzz_nnn = 0.0;
    double kpm_nnn = 0.0;
    double c_nnn = 0.0;
};

/// mu_{1,2} = -Delta/2 -+ sqrt(Delta^2 + 8)/2.
std::pair<double, double> n4_mu(double delta);
ClosedFormN4 closed_form_n4(double delta, double beta, double j = 1.0);

}  // namespace spinent
