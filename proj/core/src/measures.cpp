#include "spinent/measures.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

namespace spinent {

namespace {

constexpr double kClamp = 1e-10;
constexpr double kTie = 1e-12;

// sqrt(lo * hi), where lo and hi are four times a diagonal population of the
// pair state. Factors at the rounding level of the correlations are zero.
double xi_from_factors(double lo, double hi) {
    constexpr double kRounding = 16.0 * std::numeric_limits<double>::epsilon();
    if (lo <= kRounding || hi <= kRounding) return 0.0;
    return std::sqrt(lo * hi);
}

Eigen::Matrix4cd sigma_y_sigma_y() {
    const Eigen::Matrix2cd y = pauli_matrix(Pauli::y);
    Eigen::Matrix4cd out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = y(i, j) * y;
    return out;
}

std::vector<int> normalized_subset(std::span<const int> subset, int n_qubits) {
    std::vector<int> out(subset.begin(), subset.end());
    std::sort(out.begin(), out.end());
    if (out.empty() || std::adjacent_find(out.begin(), out.end()) != out.end()) {
        throw std::invalid_argument("iconcurrence: subset must be non-empty without repeated sites");
    }
    if (out.front() < 1 || out.back() > n_qubits) throw std::out_of_range("iconcurrence: site out of range");
    if (static_cast<int>(out.size()) >= n_qubits) {
        throw std::invalid_argument("iconcurrence: subset must be a proper subset of the sites");
    }
    return out;
}

PureState dominant_state(const DensityMatrix& rho, const char* what) {
    if (rho.purity() < 1.0 - kPurityTolerance) {
        throw std::invalid_argument(std::string(what) + ": input is mixed (Tr rho^2 = " +
                                    std::to_string(rho.purity()) + ")");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix());
    return PureState::normalized(rho.n_qubits(), es.eigenvectors().col(rho.dim() - 1));
}

// 2 (1 - Tr rho_A^2) = 4 sum_{i<j} q_i q_j over squared Schmidt coefficients q.
double schmidt_iconcurrence(const PureState& state, const std::vector<int>& a) {
    const int n = state.n_qubits();
    const auto na = static_cast<int>(a.size());
    Matrix psi = Matrix::Zero(Eigen::Index{1} << na, Eigen::Index{1} << (n - na));
    const Vector& amp = state.amplitudes();
    for (Eigen::Index i = 0; i < amp.size(); ++i) {
        Eigen::Index ia = 0, ib = 0;
        for (int site = 1; site <= n; ++site) {
            const int bit = qubit_bit(static_cast<std::size_t>(i), site, n);
            if (std::binary_search(a.begin(), a.end(), site)) {
                ia = 2 * ia + bit;
            } else {
                ib = 2 * ib + bit;
            }
        }
        psi(ia, ib) = amp(i);
    }
    const Eigen::VectorXd s = Eigen::JacobiSVD<Matrix>(psi).singularValues();
    double acc = 0.0;
    double prefix = 0.0;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        const double q = s(i) * s(i);
        acc += prefix * q;
        prefix += q;
    }
    return 2.0 * std::sqrt(acc);
}

}  // namespace

ConcurrenceResult concurrence_wootters(const DensityMatrix& rho) {
    if (rho.n_qubits() != 2) throw std::invalid_argument("concurrence_wootters: expects a two-qubit state");
    // lambda_i are the singular values of V^T (sy x sy) V with rho = V V^dagger,
    // i.e. the square roots of the eigenvalues of rho (sy x sy) rho* (sy x sy).
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(Eigen::Matrix4cd(rho.matrix()));
    if (es.info() != Eigen::Success) throw std::runtime_error("concurrence_wootters: eigensolver failed");
    Eigen::Matrix4cd v = es.eigenvectors();
    for (int i = 0; i < 4; ++i) {
        const double p = es.eigenvalues()(i);
        if (p < -kClamp) {
            throw std::invalid_argument("concurrence_wootters: negative eigenvalue " + std::to_string(p) +
                                        " (input is not a valid density matrix)");
        }
        v.col(i) *= std::sqrt(std::max(p, 0.0));
    }
    const Eigen::Matrix4cd tau = v.transpose() * sigma_y_sigma_y() * v;
    Eigen::JacobiSVD<Eigen::Matrix4cd> svd(tau);

    ConcurrenceResult out;
    for (int i = 0; i < 4; ++i) out.lambdas[static_cast<std::size_t>(i)] = svd.singularValues()(i);
    std::sort(out.lambdas.begin(), out.lambdas.end(), std::greater<>());

    // Cross-check against the general eigenproblem of the 4x4 product.
    const Eigen::Matrix4cd r = rho.matrix();
    const Eigen::Matrix4cd yy = sigma_y_sigma_y();
    // Denormal entries stall the Schur iteration.
    const Eigen::Matrix4cd m = (r * yy * r.conjugate() * yy).unaryExpr([](cplx x) {
        return std::abs(x) < 1e-100 ? cplx(0.0) : x;
    });
    Eigen::ComplexEigenSolver<Eigen::Matrix4cd> ces(m);
    if (ces.info() != Eigen::Success) throw std::runtime_error("concurrence_wootters: eigensolver failed");
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    const Eigen::Matrix4cd residual = m * ces.eigenvectors() - ces.eigenvectors() * ces.eigenvalues().asDiagonal();
    if (residual.cwiseAbs().maxCoeff() > 1e-10 * scale) {
        throw std::runtime_error("concurrence_wootters: eigen-decomposition residual too large");
    }
    std::array<double, 4> ev{};
    for (int i = 0; i < 4; ++i) {
        ev[static_cast<std::size_t>(i)] = ces.eigenvalues()(i).real();
        if (ev[static_cast<std::size_t>(i)] < -kClamp) {
            throw std::invalid_argument("concurrence_wootters: negative eigenvalue " +
                                        std::to_string(ev[static_cast<std::size_t>(i)]));
        }
    }
    std::sort(ev.begin(), ev.end(), std::greater<>());
    for (std::size_t i = 0; i < 4; ++i) {
        if (std::abs(std::max(ev[i], 0.0) - out.lambdas[i] * out.lambdas[i]) > 1e-9 * scale) {
            throw std::runtime_error("concurrence_wootters: eigenvalue and singular-value routes disagree");
        }
    }
    const double sum = out.lambdas[0] + out.lambdas[1] + out.lambdas[2] + out.lambdas[3];
    out.c_tilde = 2.0 * out.lambdas[0] - sum;
    out.c = std::max(0.0, out.c_tilde);
    return out;
}

ConcurrenceResult concurrence_closed_form(const CorrelationSet& cs) {
    const double off = cs.off_block_magnitude();
    if (off > kOffBlockTolerance) {
        throw SymmetryViolation("concurrence_closed_form: state lacks S^z structure (off-block coefficient " +
                                    std::to_string(off) + ")",
                                off);
    }
    auto xi = [](double a, double b) {
        const double lo = a - b;
        const double hi = a + b;
        if (lo < -kClamp || hi < -kClamp) {
            throw std::invalid_argument("concurrence_closed_form: correlations are not physical");
        }
        return xi_from_factors(lo, hi);
    };
    const double k = std::abs(cs.kpm);
    ConcurrenceResult out;
    out.xi_plus = xi(1.0 + cs.kzz, cs.kz_n + cs.kz_m);
    out.xi_minus = xi(1.0 - cs.kzz, cs.kz_n - cs.kz_m);

    const double l12 = 0.25 * out.xi_plus;
    const double l3 = 0.25 * std::abs(out.xi_minus + 4.0 * k);
    const double l4 = 0.25 * std::abs(out.xi_minus - 4.0 * k);
    out.lambdas = {l12, l12, l3, l4};
    std::sort(out.lambdas.begin(), out.lambdas.end(), std::greater<>());

    // Ties go to the non-strict branch.
    const bool pair_below = l3 - l12 > kTie;
    const bool xi_above = out.xi_minus - 4.0 * k > kTie;
    if (pair_below && xi_above) {
        out.case_index = 1;
        out.c_tilde = 0.5 * (4.0 * k - out.xi_plus);
    } else if (pair_below) {
        out.case_index = 2;
        out.c_tilde = 0.5 * (out.xi_minus - out.xi_plus);
    } else if (xi_above) {
        out.case_index = 3;
        out.c_tilde = -0.5 * out.xi_minus;
    } else {
        out.case_index = 4;
        out.c_tilde = -2.0 * k;
    }
    out.c = std::max(0.0, out.c_tilde);
    return out;
}

EntanglementConditions entanglement_conditions(const CorrelationSet& cs) {
    EntanglementConditions out;
    const double connected = cs.kzz - cs.kz_n * cs.kz_m;
    const double xi_plus = xi_from_factors(1.0 + cs.kzz - (cs.kz_n + cs.kz_m), 1.0 + cs.kzz + (cs.kz_n + cs.kz_m));
    out.necessary = connected < 0.0;
    out.sufficient = out.necessary && xi_plus < 4.0 * std::abs(cs.kpm);
    if (std::abs(cs.kz_n) <= 1e-10 && std::abs(cs.kz_m) <= 1e-10) {
        ConditionPair f;
        f.necessary = cs.kzz < 0.0;
        f.sufficient = f.necessary && 1.0 < std::abs(cs.kxx) + std::abs(cs.kyy) + std::abs(cs.kzz);
        out.f_symmetric = f;
    }
    return out;
}

double iconcurrence_single(const SiteExpectation& e) {
    const double v = 1.0 - e.kz * e.kz - 4.0 * std::norm(e.kplus);
    return std::sqrt(std::max(v, 0.0));
}

double iconcurrence_pair(const CorrelationSet& cs) {
    const double v = 1.5 - 0.5 * (cs.kzz * cs.kzz + cs.kz_n * cs.kz_n + cs.kz_m * cs.kz_m) - 4.0 * std::norm(cs.kpm);
    return std::sqrt(std::max(v, 0.0));
}

IConcurrenceResult iconcurrence(const PureState& state, std::span<const int> subset_a) {
    const int n = state.n_qubits();
    const std::vector<int> a = normalized_subset(subset_a, n);
    IConcurrenceResult out;
    out.value = schmidt_iconcurrence(state, a);
    out.d_a = 1 << a.size();
    out.d_b = 1 << (n - static_cast<int>(a.size()));
    out.d = std::min(out.d_a, out.d_b);
    out.upper_bound = std::sqrt(2.0 * (out.d - 1) / out.d);

    if (a.size() == 1) {
        out.from_correlations = iconcurrence_single(site_expectation(state, a.front()));
    } else if (a.size() == 2) {
        const CorrelationSet cs = correlations(partial_trace(state, a), 1, 2);
        if (cs.off_block_magnitude() <= kOffBlockTolerance) out.from_correlations = iconcurrence_pair(cs);
    }
    if (out.from_correlations &&
        std::abs(*out.from_correlations * *out.from_correlations - out.value * out.value) > 1e-10) {
        throw std::logic_error("iconcurrence: correlation-function route disagrees with the partial trace");
    }
    return out;
}

IConcurrenceResult iconcurrence(const DensityMatrix& rho, std::span<const int> subset_a) {
    return iconcurrence(dominant_state(rho, "iconcurrence"), subset_a);
}

TangleResult three_tangle(const DensityMatrix& rho, int central) {
    if (rho.n_qubits() != 3) throw std::invalid_argument("three_tangle: expects a three-qubit state");
    if (central < 1 || central > 3) throw std::out_of_range("three_tangle: central qubit must be 1..3");
    if (rho.purity() < 1.0 - kPurityTolerance) throw std::invalid_argument("three_tangle: input is mixed");

    std::vector<int> others;
    for (int s = 1; s <= 3; ++s)
        if (s != central) others.push_back(s);

    const std::array<int, 1> c{central};
    const Matrix rho_c = partial_trace(rho, c).matrix();
    TangleResult out;
    out.c_1_23_sq = 4.0 * (rho_c(0, 0) * rho_c(1, 1) - rho_c(0, 1) * rho_c(1, 0)).real();
    auto pair_sq = [&](int other) {
        const std::array<int, 2> keep{std::min(central, other), std::max(central, other)};
        const double conc = concurrence_wootters(partial_trace(rho, keep)).c;
        return conc * conc;
    };
    out.c_12_sq = pair_sq(others[0]);
    out.c_13_sq = pair_sq(others[1]);
    out.tau = out.c_1_23_sq - out.c_12_sq - out.c_13_sq;
    return out;
}

TangleResult three_tangle(const PureState& state, int central) {
    return three_tangle(DensityMatrix::from_pure(state), central);
}

}  // namespace spinent
