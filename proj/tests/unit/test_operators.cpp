#include "spinent/operators.hpp"

#include "testing.hpp"

#include <gtest/gtest.h>

#include <array>
#include <stdexcept>

using namespace spinent;
using spinent::testing::apply;

namespace {

Vector ket(std::string_view bits) { return PureState::basis(bits).amplitudes(); }

}  // namespace

TEST(Operators, HilbertDimBounds) {
    EXPECT_EQ(hilbert_dim(1), 2U);
    EXPECT_EQ(hilbert_dim(12), 4096U);
    EXPECT_THROW(hilbert_dim(0), std::invalid_argument);
    EXPECT_THROW(hilbert_dim(13), std::invalid_argument);
}

TEST(Operators, PauliConventions) {
    const Eigen::Matrix2cd z = pauli_matrix(Pauli::z);
    EXPECT_EQ(z(0, 0), cplx(-1.0));
    EXPECT_EQ(z(1, 1), cplx(1.0));
    // sigma+ raises |0> to |1>.
    const Eigen::Matrix2cd p = pauli_matrix(Pauli::plus);
    EXPECT_EQ(p(1, 0), cplx(1.0));
    EXPECT_EQ(p(0, 1), cplx(0.0));
    EXPECT_LT((pauli_matrix(Pauli::minus) - p.adjoint()).norm(), 1e-15);
    const Eigen::Matrix2cd x = pauli_matrix(Pauli::x);
    const Eigen::Matrix2cd y = pauli_matrix(Pauli::y);
    EXPECT_LT((x * y - cplx(0, 1) * z).norm(), 1e-15);
    EXPECT_LT(((x + cplx(0, 1) * y) / 2.0 - p).norm(), 1e-15);
}

TEST(Operators, EmbedExamples) {
    EXPECT_LT((apply(embed(pauli(Pauli::z), 1, 2), PureState::basis("01")) + ket("01")).norm(), 1e-15);
    EXPECT_LT((apply(embed(pauli(Pauli::x), 2, 2), PureState::basis("00")) - ket("01")).norm(), 1e-15);
    EXPECT_EQ(max_entry_distance(embed(pauli(Pauli::identity), 3, 4).matrix(), DenseOperator::identity(4).matrix()), 0.0);
}

TEST(Operators, EmbedRejectsBadSite) {
    EXPECT_THROW(embed(pauli(Pauli::z), 0, 3), std::out_of_range);
    EXPECT_THROW(embed(pauli(Pauli::z), 4, 3), std::out_of_range);
}

TEST(Operators, DistinctSitesCommute) {
    const std::array kinds{Pauli::x, Pauli::y, Pauli::z, Pauli::plus, Pauli::minus};
    for (Pauli a : kinds)
        for (Pauli b : kinds)
            for (int n = 1; n <= 3; ++n)
                for (int m = 1; m <= 3; ++m) {
                    if (n == m) continue;
                    EXPECT_EQ(commutator_norm(embed(pauli(a), n, 3), embed(pauli(b), m, 3)), 0.0);
                }
}

TEST(Operators, EmbedProductMatchesProductOfEmbeds) {
    const std::array<SiteFactor, 2> f{SiteFactor{1, pauli_matrix(Pauli::plus)}, SiteFactor{3, pauli_matrix(Pauli::y)}};
    const DenseOperator direct = embed(pauli(Pauli::plus), 1, 3) * embed(pauli(Pauli::y), 3, 3);
    EXPECT_LT(max_entry_distance(embed_product(f, 3).matrix(), direct.matrix()), 1e-15);
    const std::array<SiteFactor, 2> dup{SiteFactor{2, pauli_matrix(Pauli::x)}, SiteFactor{2, pauli_matrix(Pauli::x)}};
    EXPECT_THROW(embed_product(dup, 3), std::invalid_argument);
}

TEST(Operators, ExpectationMatchesTrace) {
    std::mt19937_64 rng(1);
    const DensityMatrix rho = spinent::testing::random_mixed(rng, 3, 3);
    const std::array<SiteFactor, 2> f{SiteFactor{1, pauli_matrix(Pauli::z)}, SiteFactor{2, pauli_matrix(Pauli::minus)}};
    const cplx direct = (rho.matrix() * embed_product(f, 3).matrix()).trace();
    EXPECT_LT(std::abs(expectation(rho.matrix(), f, 3) - direct), 1e-14);
    const PureState psi = spinent::testing::random_pure(rng, 3);
    const cplx pure_direct = psi.amplitudes().dot(embed_product(f, 3).matrix() * psi.amplitudes());
    EXPECT_LT(std::abs(expectation(psi, f) - pure_direct), 1e-14);
}

TEST(Operators, GlobalOperatorExamples) {
    EXPECT_LT((apply(total_sz(2), PureState::basis("11")) - 2.0 * ket("11")).norm(), 1e-15);
    EXPECT_LT((apply(spinflip(3), PureState::basis("010")) - ket("101")).norm(), 1e-15);
    EXPECT_LT((apply(translation(4, 1), PureState::basis("1000")) - ket("0100")).norm(), 1e-15);
    EXPECT_LT((apply(translation(3, 1), PureState::basis("001")) - ket("100")).norm(), 1e-15);
    EXPECT_EQ(sz_of_index(0, 3), -3);
    EXPECT_EQ(sz_of_index(5, 3), 1);
}

TEST(Operators, TranslationIsCyclicUnitary) {
    for (int n = 1; n <= 6; ++n) {
        const DenseOperator t = translation(n, 1);
        EXPECT_TRUE(t.is_unitary(1e-12));
        DenseOperator p = DenseOperator::identity(n);
        for (int i = 0; i < n; ++i) p = p * t;
        EXPECT_LT(max_entry_distance(p.matrix(), DenseOperator::identity(n).matrix()), 1e-12) << "N=" << n;
        EXPECT_LT(max_entry_distance(translation(n, 2).matrix(), (t * t).matrix()), 1e-12);
    }
}

TEST(Operators, YangARequiresEvenN) {
    EXPECT_THROW(yang_A(3), std::invalid_argument);
    const DenseOperator a = yang_A(4);
    const DenseOperator expect = embed(pauli(Pauli::z), 1, 4) * embed(pauli(Pauli::z), 3, 4);
    EXPECT_EQ(max_entry_distance(a.matrix(), expect.matrix()), 0.0);
}

TEST(Operators, PureStateValidation) {
    Vector v = Vector::Zero(4);
    v(0) = 1.0;
    v(1) = 1.0;
    EXPECT_THROW(PureState(2, v), std::invalid_argument);
    EXPECT_NO_THROW(PureState::normalized(2, v));
    EXPECT_THROW(PureState::normalized(2, Vector::Zero(4)), std::invalid_argument);
    EXPECT_THROW(PureState::basis("01a"), std::invalid_argument);
    EXPECT_THROW(PureState(2, Vector::Zero(8)), std::invalid_argument);
}

TEST(Operators, DensityMatrixValidation) {
    Matrix m = Matrix::Identity(2, 2);
    EXPECT_THROW(DensityMatrix(1, m), std::invalid_argument);  // trace 2
    m(0, 0) = 1.5;
    m(1, 1) = -0.5;
    EXPECT_THROW(DensityMatrix(1, m), std::invalid_argument);  // negative eigenvalue
    Matrix h = Matrix::Identity(2, 2) / 2.0;
    h(0, 1) = 0.1;
    EXPECT_THROW(DensityMatrix(1, h), std::invalid_argument);  // not Hermitian
    EXPECT_NEAR(DensityMatrix::maximally_mixed(3).purity(), 1.0 / 8.0, 1e-15);
}

TEST(Operators, PartialTraceBellAndIdentity) {
    Vector bell = Vector::Zero(4);
    bell(1) = bell(2) = 1.0 / std::sqrt(2.0);
    const PureState psi(2, bell);
    const std::array keep2{2};
    const DensityMatrix r = partial_trace(DensityMatrix::from_pure(psi), keep2);
    EXPECT_LT(max_entry_distance(r.matrix(), Matrix::Identity(2, 2) / 2.0), 1e-15);

    std::mt19937_64 rng(2);
    const DensityMatrix rho = spinent::testing::random_mixed(rng, 3, 2);
    const std::array all{1, 2, 3};
    EXPECT_LT(max_entry_distance(partial_trace(rho, all).matrix(), rho.matrix()), 1e-15);
}

TEST(Operators, PartialTraceOfOneXOneZ) {
    // |1_x 1_z> with |1_x> = (|0> + |1>)/sqrt 2: K^z = 0, K^+ = 1/2 on site 1.
    Vector v = Vector::Zero(4);
    v(1) = v(3) = 1.0 / std::sqrt(2.0);
    const std::array keep{1};
    const Matrix r = partial_trace(PureState(2, v), keep).matrix();
    Matrix expect(2, 2);
    expect << 0.5, 0.5, 0.5, 0.5;
    EXPECT_LT(max_entry_distance(r, expect), 1e-15);
}

TEST(Operators, PartialTraceRejectsBadSubsets) {
    const DensityMatrix rho = DensityMatrix::maximally_mixed(3);
    EXPECT_THROW(partial_trace(rho, std::span<const int>{}), std::invalid_argument);
    const std::array dec{2, 1};
    EXPECT_THROW(partial_trace(rho, dec), std::invalid_argument);
    const std::array out{1, 4};
    EXPECT_THROW(partial_trace(rho, out), std::out_of_range);
}

TEST(OperatorsProperty, PartialTracePreservesTraceAndPositivity) {
    std::mt19937_64 rng(3);
    for (int n = 2; n <= 6; ++n) {
        for (int trial = 0; trial < 5; ++trial) {
            const DensityMatrix rho = spinent::testing::random_mixed(rng, n, 1 + trial);
            for (unsigned mask = 1; mask < (1U << n); mask += 3) {
                std::vector<int> keep;
                for (int s = 1; s <= n; ++s)
                    if (mask & (1U << (s - 1))) keep.push_back(s);
                const DensityMatrix r = partial_trace(rho, keep);
                EXPECT_NEAR(r.matrix().trace().real(), 1.0, 1e-10);
                Eigen::SelfAdjointEigenSolver<Matrix> es(r.matrix());
                EXPECT_GE(es.eigenvalues().minCoeff(), -1e-10);
            }
        }
    }
}

TEST(OperatorsProperty, PureAndMixedPartialTraceAgree) {
    std::mt19937_64 rng(4);
    const PureState psi = spinent::testing::random_pure(rng, 5);
    const std::array keep{2, 4, 5};
    EXPECT_LT(max_entry_distance(partial_trace(psi, keep).matrix(),
                                 partial_trace(DensityMatrix::from_pure(psi), keep).matrix()),
              1e-14);
}
