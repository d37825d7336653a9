#include "spinent/model.hpp"
#include "spinent/spectrum.hpp"

#include "testing.hpp"

#include <gtest/gtest.h>

#include <stdexcept>

using namespace spinent;

namespace {

// Matrix elements written out on basis bits.
Matrix bitwise_hamiltonian(const ModelSpec& spec) {
    const int n = spec.n_qubits;
    const auto dim = static_cast<Eigen::Index>(hilbert_dim(n));
    Matrix h = Matrix::Zero(dim, dim);
    const auto bonds = spec.bonds();
    for (Eigen::Index i = 0; i < dim; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        auto z = [&](int site) { return qubit_bit(idx, site, n) ? 1.0 : -1.0; };
        for (std::size_t b = 0; b < bonds.size(); ++b) {
            const auto [p, q] = bonds[b];
            const double j = spec.couplings[b];
            h(i, i) += 0.25 * j * spec.delta * z(p) * z(q);
            if (z(p) != z(q)) {
                const std::size_t flipped = idx ^ (std::size_t{1} << (n - p)) ^ (std::size_t{1} << (n - q));
                h(static_cast<Eigen::Index>(flipped), i) += 0.5 * j;
            }
        }
        for (int s = 1; s <= n; ++s) h(i, i) -= 0.5 * spec.fields[static_cast<std::size_t>(s - 1)] * z(s);
    }
    return h;
}

}  // namespace

TEST(Model, RingMatchesBitwiseOracle) {
    for (int n = 2; n <= 6; ++n) {
        for (double delta : {-2.0, -0.5, 0.0, 1.0, 3.0}) {
            for (double j : {1.0, -1.0}) {
                const ModelSpec spec = ModelSpec::ring(n, j, delta);
                EXPECT_LT(max_entry_distance(build_hamiltonian(spec).matrix(), bitwise_hamiltonian(spec)), 1e-14);
            }
        }
    }
}

TEST(Model, ChainMatchesBitwiseOracle) {
    const ModelSpec spec = ModelSpec::chain({0.3, -1.2, 0.7, 2.0}, 0.4, {0.1, -0.2, 0.5, 0.0, 1.5});
    const DenseOperator h = build_hamiltonian(spec);
    EXPECT_TRUE(h.is_hermitian());
    EXPECT_LT(max_entry_distance(h.matrix(), bitwise_hamiltonian(spec)), 1e-14);
}

TEST(Model, AllDownEnergyIsDelta) {
    for (double delta : {-1.5, 0.0, 2.5}) {
        const DenseOperator h = build_hamiltonian(ModelSpec::ring(4, 1.0, delta));
        const Vector v = PureState::basis("0000").amplitudes();
        EXPECT_LT((h.matrix() * v - delta * v).norm(), 1e-14);
    }
}

TEST(Model, N2RingDoublesBondUnlessDeduped) {
    ModelSpec spec = ModelSpec::ring(2, 1.0, 0.7);
    EXPECT_EQ(spec.bonds().size(), 2U);
    const Matrix doubled = build_hamiltonian(spec).matrix();
    spec.dedupe_n2 = true;
    const Matrix single = build_hamiltonian(spec).matrix();
    EXPECT_LT(max_entry_distance(doubled, 2.0 * single), 1e-15);
    const ModelSpec open = ModelSpec::chain({1.0}, 0.7, {0.0, 0.0});
    EXPECT_LT(max_entry_distance(single, build_hamiltonian(open).matrix()), 1e-15);
}

TEST(Model, OpenChainIsRingWithoutWrapBond) {
    const ModelSpec ring = ModelSpec::ring(5, 1.0, 0.3);
    const ModelSpec chain = ModelSpec::chain({1.0, 1.0, 1.0, 1.0}, 0.3, std::vector<double>(5, 0.0));
    const ModelSpec wrap = ModelSpec::chain({0.0, 0.0, 0.0, 0.0}, 0.3, std::vector<double>(5, 0.0));
    const Matrix hop = 0.5 * (embed(pauli(Pauli::plus), 5, 5) * embed(pauli(Pauli::minus), 1, 5) +
                              embed(pauli(Pauli::minus), 5, 5) * embed(pauli(Pauli::plus), 1, 5))
                                 .matrix() +
                       0.25 * 0.3 * (embed(pauli(Pauli::z), 5, 5) * embed(pauli(Pauli::z), 1, 5)).matrix();
    EXPECT_LT(max_entry_distance(build_hamiltonian(ring).matrix() - build_hamiltonian(chain).matrix(), hop), 1e-15);
    EXPECT_LT(build_hamiltonian(wrap).matrix().norm(), 1e-15);
}

TEST(Model, PeriodicN1HasNoBonds) {
    const ModelSpec spec = ModelSpec::ring(1, 1.0, 1.0);
    EXPECT_TRUE(spec.bonds().empty());
    EXPECT_LT(build_hamiltonian(spec).matrix().norm(), 1e-15);
}

TEST(Model, ValidationErrors) {
    ModelSpec spec = ModelSpec::ring(4, 1.0, 1.0);
    spec.couplings.pop_back();
    EXPECT_THROW(spec.validate(), std::invalid_argument);
    spec = ModelSpec::ring(4, 1.0, 1.0);
    spec.fields.push_back(0.0);
    EXPECT_THROW(spec.validate(), std::invalid_argument);
    spec = ModelSpec::ring(4, 1.0, 1.0);
    spec.delta = std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW(spec.validate(), std::invalid_argument);
    spec = ModelSpec::ring(4, 1.0, 1.0);
    spec.dedupe_n2 = true;
    EXPECT_THROW(spec.validate(), std::invalid_argument);
    EXPECT_THROW(ModelSpec::ring(13, 1.0, 1.0), std::invalid_argument);
    EXPECT_THROW(ModelSpec::ring(0, 1.0, 1.0), std::invalid_argument);
    EXPECT_THROW(boundary_from_string("closed"), std::invalid_argument);
}

TEST(Model, HomogeneityPredicates) {
    const ModelSpec ring = ModelSpec::ring(4, -1.0, 0.5);
    EXPECT_TRUE(ring.is_homogeneous());
    EXPECT_TRUE(ring.has_zero_field());
    EXPECT_TRUE(ring.is_translation_invariant());
    EXPECT_EQ(ring.coupling(), -1.0);
    const ModelSpec chain = ModelSpec::chain({1.0, 2.0}, 0.5, {0.0, 0.1, 0.0});
    EXPECT_FALSE(chain.is_homogeneous());
    EXPECT_FALSE(chain.has_zero_field());
    EXPECT_FALSE(chain.is_translation_invariant());
    const ModelSpec scaled = ring.with(2.0, -1.0);
    EXPECT_EQ(scaled.coupling(), 2.0);
    EXPECT_EQ(scaled.delta, -1.0);
}

TEST(Model, JsonRoundTrip) {
    const ModelSpec spec = ModelSpec::chain({0.5, -1.0}, 0.25, {0.0, 1.0, -2.0});
    const ModelSpec back = parse_model_spec(model_spec_to_json(spec));
    EXPECT_EQ(back.n_qubits, 3);
    EXPECT_EQ(back.boundary, Boundary::open);
    EXPECT_EQ(back.couplings, spec.couplings);
    EXPECT_EQ(back.fields, spec.fields);
    EXPECT_EQ(back.delta, 0.25);
}

TEST(Model, JsonErrors) {
    EXPECT_THROW(parse_model_spec("{"), std::invalid_argument);
    EXPECT_THROW(parse_model_spec("[1]"), std::invalid_argument);
    EXPECT_THROW(parse_model_spec(R"({"n_qubits":2,"couplings":[1,1]})"), std::invalid_argument);
    EXPECT_THROW(parse_model_spec(R"({"n_qubits":2,"couplings":[1,1],"delta":1,"extra":0})"), std::invalid_argument);
    EXPECT_THROW(parse_model_spec(R"({"n_qubits":2,"couplings":"x","delta":1})"), std::invalid_argument);
    EXPECT_THROW(parse_model_spec(R"({"n_qubits":3,"couplings":[1,1],"delta":1})"), std::invalid_argument);
    EXPECT_NO_THROW(parse_model_spec(R"({"n_qubits":2,"couplings":[1,1],"delta":1})"));
    EXPECT_THROW(load_model_spec("/nonexistent/spec.json"), std::invalid_argument);
}

TEST(Model, PlaceholderConfigLoads) {
    const ModelSpec spec = load_model_spec(SPINENT_CONFIG_DIR "/nmr_placeholder.json");
    EXPECT_EQ(spec.n_qubits, 5);
    EXPECT_EQ(spec.boundary, Boundary::open);
    const Vector v = PureState::basis("11111").amplitudes();
    EXPECT_LT((build_hamiltonian(spec).matrix() * v).norm(), 1e-15);
}

TEST(Model, SymmetriesOfHomogeneousRings) {
    for (const ModelSpec& spec : {ModelSpec::ring(4, 1.0, 1.0), ModelSpec::ring(5, 1.0, -0.5)}) {
        const SymmetryReport r = check_symmetries(spec);
        EXPECT_LE(r.sz, 1e-12);
        EXPECT_LE(r.spinflip, 1e-12);
        EXPECT_LE(r.translation, 1e-12);
    }
    const SymmetryReport chain = check_symmetries(ModelSpec::chain({1.0, 0.5, 2.0}, 0.3, {0.2, -0.4, 0.1, 0.0}));
    EXPECT_LE(chain.sz, 1e-12);
    EXPECT_GT(chain.spinflip, 1e-3);
    EXPECT_GT(chain.translation, 1e-3);
}

TEST(Model, YangMap) {
    EXPECT_LE(yang_map_check(ModelSpec::ring(4, 1.0, 2.0)), 1e-12);
    EXPECT_LE(yang_map_check(ModelSpec::ring(6, -1.0, -0.5)), 1e-12);
    EXPECT_LE(yang_map_check(ModelSpec::ring(2, 1.0, 0.0)), 1e-12);
    EXPECT_THROW(yang_map_check(ModelSpec::ring(5, 1.0, 1.0)), std::invalid_argument);
    EXPECT_THROW(yang_map_check(ModelSpec::chain({1.0, 1.0, 1.0}, 1.0, std::vector<double>(4, 0.0))),
                 std::invalid_argument);
}

TEST(ModelProperty, EvenRingSpectrumIdentityPerSector) {
    for (int n : {2, 4, 6}) {
        for (double delta = -2.0; delta <= 3.0; delta += 0.5) {
            const SpectrumResult a = diagonalize(ModelSpec::ring(n, 1.0, delta));
            const SpectrumResult b = diagonalize(ModelSpec::ring(n, -1.0, -delta));
            for (int s = -n; s <= n; s += 2) {
                std::vector<double> ea, eb;
                for (std::size_t j = 0; j < a.size(); ++j)
                    if (a.label(j).s == s) ea.push_back(a.energy(j));
                for (std::size_t j = 0; j < b.size(); ++j)
                    if (b.label(j).s == s) eb.push_back(b.energy(j));
                ASSERT_EQ(ea.size(), eb.size());
                for (std::size_t i = 0; i < ea.size(); ++i) EXPECT_NEAR(ea[i], eb[i], 1e-10) << "N=" << n << " s=" << s;
            }
        }
    }
}

TEST(ModelProperty, UniformFieldShiftsSectorsByMinusHalfOmegaS) {
    // -1/2 omega sum_n sigma^z_n = -omega s / 2 on sector s.
    const double omega = 0.37;
    ModelSpec plain = ModelSpec::chain({1.0, 0.6, 1.3}, 0.8, std::vector<double>(4, 0.0));
    ModelSpec field = plain;
    field.fields.assign(4, omega);
    const SpectrumResult a = diagonalize(plain);
    const Matrix h = build_hamiltonian(field).matrix();
    for (std::size_t j = 0; j < a.size(); ++j) {
        const Vector v = a.vectors().col(static_cast<Eigen::Index>(j));
        const double shifted = a.energy(j) - 0.5 * omega * a.label(j).s;
        EXPECT_LT((h * v - shifted * v).norm(), 1e-10);
    }
}
