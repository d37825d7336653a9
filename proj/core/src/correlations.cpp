#include "spinent/correlations.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace spinent {

namespace {

SiteFactor factor(int site, Pauli p) { return {site, pauli_matrix(p)}; }

cplx pair_expectation(const DensityMatrix& rho, int n, Pauli a, int m, Pauli b) {
    const std::array<SiteFactor, 2> f{factor(n, a), factor(m, b)};
    return expectation(rho.matrix(), f, rho.n_qubits());
}

cplx site_value(const DensityMatrix& rho, int n, Pauli a) {
    const std::array<SiteFactor, 1> f{factor(n, a)};
    return expectation(rho.matrix(), f, rho.n_qubits());
}

// Off-block coefficients of the reduced matrix in the |00>,|01>,|10>,|11> basis.
struct OffBlock {
    cplx r00_01, r00_10, r00_11, r01_11, r10_11;
};

OffBlock off_block(const CorrelationSet& cs) {
    return {0.5 * (cs.kplus_m - cs.kzplus), 0.5 * (cs.kplus_n - cs.kplusz), cs.kplusplus,
            0.5 * (cs.kplus_n + cs.kplusz), 0.5 * (cs.kplus_m + cs.kzplus)};
}

}  // namespace

double CorrelationSet::off_block_magnitude() const {
    const OffBlock o = off_block(*this);
    return std::max({std::abs(o.r00_01), std::abs(o.r00_10), std::abs(o.r00_11), std::abs(o.r01_11),
                     std::abs(o.r10_11)});
}

CorrelationSet correlations(const DensityMatrix& rho, int n, int m) {
    const int nq = rho.n_qubits();
    if (!(1 <= n && n < m && m <= nq)) {
        throw std::out_of_range("correlations: need 1 <= n < m <= N, got (" + std::to_string(n) + ", " +
                                std::to_string(m) + ")");
    }
    CorrelationSet cs;
    cs.n = n;
    cs.m = m;
    cs.kz_n = site_value(rho, n, Pauli::z).real();
    cs.kz_m = site_value(rho, m, Pauli::z).real();
    cs.kplus_n = site_value(rho, n, Pauli::plus);
    cs.kplus_m = site_value(rho, m, Pauli::plus);
    cs.kzz = pair_expectation(rho, n, Pauli::z, m, Pauli::z).real();
    cs.kpm = pair_expectation(rho, n, Pauli::plus, m, Pauli::minus);
    cs.kxx = pair_expectation(rho, n, Pauli::x, m, Pauli::x).real();
    cs.kyy = pair_expectation(rho, n, Pauli::y, m, Pauli::y).real();
    cs.kzplus = pair_expectation(rho, n, Pauli::z, m, Pauli::plus);
    cs.kplusz = pair_expectation(rho, n, Pauli::plus, m, Pauli::z);
    cs.kplusplus = pair_expectation(rho, n, Pauli::plus, m, Pauli::plus);
    return cs;
}

SiteExpectation site_expectation(const DensityMatrix& rho, int n) {
    return {site_value(rho, n, Pauli::z).real(), site_value(rho, n, Pauli::plus)};
}

SiteExpectation site_expectation(const PureState& psi, int n) {
    const std::array<SiteFactor, 1> z{factor(n, Pauli::z)};
    const std::array<SiteFactor, 1> p{factor(n, Pauli::plus)};
    return {expectation(psi, z).real(), expectation(psi, p)};
}

DensityMatrix rdm1_from_expectation(const SiteExpectation& e) {
    Matrix r(2, 2);
    r(0, 0) = 0.5 * (1.0 - e.kz);
    r(1, 1) = 0.5 * (1.0 + e.kz);
    r(0, 1) = e.kplus;
    r(1, 0) = std::conj(e.kplus);
    return DensityMatrix::trusted(1, std::move(r));
}

DensityMatrix rdm2_from_correlations(const CorrelationSet& cs) {
    const double off = cs.off_block_magnitude();
    if (off > kOffBlockTolerance) {
        throw SymmetryViolation("rdm2_from_correlations: state lacks S^z structure (off-block coefficient " +
                                    std::to_string(off) + ")",
                                off);
    }
    const double a = cs.kz_n, b = cs.kz_m, zz = cs.kzz;
    Matrix r = Matrix::Zero(4, 4);
    r(0, 0) = 0.25 * (1.0 - a - b + zz);
    r(1, 1) = 0.25 * (1.0 - a + b - zz);
    r(2, 2) = 0.25 * (1.0 + a - b - zz);
    r(3, 3) = 0.25 * (1.0 + a + b + zz);
    r(1, 2) = cs.kpm;
    r(2, 1) = std::conj(cs.kpm);
    return DensityMatrix::trusted(2, std::move(r));
}

double zstring_expectation(const DensityMatrix& rho, std::span<const int> sites) {
    const int n = rho.n_qubits();
    for (int s : sites) {
        if (s < 1 || s > n) throw std::out_of_range("zstring_expectation: site out of range");
    }
    double acc = 0.0;
    for (Eigen::Index i = 0; i < rho.dim(); ++i) {
        int sign = 1;
        for (int s : sites) sign *= 2 * qubit_bit(static_cast<std::size_t>(i), s, n) - 1;
        acc += sign * rho.matrix()(i, i).real();
    }
    return acc;
}

NearestNeighbour nn_correlations_from_lnZ(const ModelSpec& spec, double beta, double step) {
    spec.validate();
    if (spec.boundary != Boundary::periodic || !spec.is_homogeneous()) {
        throw std::invalid_argument("nn_correlations_from_lnZ: requires a periodic homogeneous ring");
    }
    const auto n_bonds = static_cast<double>(spec.bonds().size());
    if (n_bonds == 0.0) throw std::invalid_argument("nn_correlations_from_lnZ: ring has no bonds");
    if (!(beta > 0.0)) throw std::invalid_argument("nn_correlations_from_lnZ: beta must be > 0");
    const double j = spec.coupling();
    if (j == 0.0) throw std::invalid_argument("nn_correlations_from_lnZ: J must be nonzero");
    const double delta = spec.delta;

    auto ln_z = [&](double jj, double dd) { return log_partition_function(eigenvalues(spec.with(jj, dd)), beta); };
    const double d_delta = (ln_z(j, delta + step) - ln_z(j, delta - step)) / (2.0 * step);
    const double d_j = (ln_z(j + step, delta) - ln_z(j - step, delta)) / (2.0 * step);

    // The bond count equals N except for the deduplicated N = 2 ring.
    NearestNeighbour out;
    out.kzz = -4.0 / (n_bonds * j * beta) * d_delta;
    out.kpm = -1.0 / (n_bonds * beta) * (d_j - delta / j * d_delta);
    return out;
}

std::pair<double, double> n4_mu(double delta) {
    const double root = std::sqrt(delta * delta + 8.0);
    return {-0.5 * delta - 0.5 * root, -0.5 * delta + 0.5 * root};
}

ClosedFormN4 closed_form_n4(double delta, double beta, double j) {
    if (!(beta >= 0.0)) throw std::invalid_argument("closed_form_n4: beta must be >= 0");
    const auto [mu1, mu2] = n4_mu(delta);

    // zeta^{-e} = exp(-beta J e); all terms share the factor exp(-shift) so that
    // the ratios survive very low temperatures.
    const std::array<double, 7> levels{delta, -delta, 1.0, -1.0, 0.0, mu1, mu2};
    double shift = -std::numeric_limits<double>::infinity();
    for (double e : levels) shift = std::max(shift, -beta * j * e);
    auto p = [&](double e) { return std::exp(-beta * j * e - shift); };

    const double w1 = 1.0 / (2.0 + mu1 * mu1);
    const double w2 = 1.0 / (2.0 + mu2 * mu2);

    const double z = 2.0 * p(delta) + p(-delta) + 2.0 * p(1.0) + 2.0 * p(-1.0) + 7.0 * p(0.0) + p(mu1) + p(mu2);

    ClosedFormN4 out;
    out.mu1 = mu1;
    out.mu2 = mu2;
    out.log_z = shift + std::log(z);
    out.z = std::exp(out.log_z);

    out.kzz_nn = (2.0 * p(delta) - p(-delta) - mu1 * mu1 * w1 * p(mu1) - mu2 * mu2 * w2 * p(mu2)) / z;
    out.kpm_nn = (0.5 * p(1.0) - 0.5 * p(-1.0) + mu1 * w1 * p(mu1) + mu2 * w2 * p(mu2)) / z;
    out.c_nn = std::max(
        0.0, (std::abs(p(1.0) - p(-1.0) + 2.0 * mu1 * w1 * p(mu1) + 2.0 * mu2 * w2 * p(mu2)) -
              std::abs(2.0 * p(delta) + p(1.0) + p(-1.0) + 3.5 * p(0.0) + w1 * p(mu1) + w2 * p(mu2))) /
                 z);

    out.kzz_nnn = (2.0 * p(delta) + p(-delta) - 3.0 * p(0.0) + (mu1 * mu1 - 2.0) * w1 * p(mu1) +
                   (mu2 * mu2 - 2.0) * w2 * p(mu2)) /
                  z;
    out.kpm_nnn = (0.5 * p(1.0) + 0.5 * p(-1.0) - 1.5 * p(0.0) + w1 * p(mu1) + w2 * p(mu2)) / z;
    out.c_nnn = std::max(
        0.0, (std::abs(p(1.0) + p(-1.0) - 3.0 * p(0.0) + 2.0 * w1 * p(mu1) + 2.0 * w2 * p(mu2)) -
              std::abs(2.0 * p(delta) + p(-delta) + p(1.0) + p(-1.0) + 2.0 * p(0.0) + mu1 * mu1 * w1 * p(mu1) +
                       mu2 * mu2 * w2 * p(mu2))) /
                 z);
    return out;
}

}  // namespace spinent
