#include "spinent/nmr.hpp"

#include "spinent/correlations.hpp"
#include "spinent/measures.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

namespace spinent {

namespace {

void check_site(int site, int n_qubits) {
    if (site < 1 || site > n_qubits) {
        throw std::out_of_range("gate site " + std::to_string(site) + " outside 1.." + std::to_string(n_qubits));
    }
}

struct Term {
    cplx coeff;
    const char* kets;  // five two-character tokens, qubit 1 first
};

Vector product_ket(const char* kets) {
    const std::string_view s(kets);
    if (s.size() != 2 * kNmrQubits) throw std::logic_error("product_ket: expects five tokens");
    Vector v(1);
    v(0) = 1.0;
    for (int q = 0; q < kNmrQubits; ++q) {
        const Eigen::Vector2cd k = axis_ket(s.substr(static_cast<std::size_t>(2 * q), 2));
        Vector next(2 * v.size());
        for (Eigen::Index i = 0; i < v.size(); ++i) {
            next(2 * i) = v(i) * k(0);
            next(2 * i + 1) = v(i) * k(1);
        }
        v = std::move(next);
    }
    return v;
}

PureState superpose(double prefactor, std::initializer_list<Term> terms) {
    Vector v = Vector::Zero(static_cast<Eigen::Index>(hilbert_dim(kNmrQubits)));
    for (const Term& t : terms) v += t.coeff * product_ket(t.kets);
    return PureState(kNmrQubits, prefactor * v);
}

// 12 significant digits; magnitudes below 1e-14 become 0.
double round12(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", std::abs(x) < 1e-14 ? 0.0 : x);
    const double r = std::stod(buf);
    return r == 0.0 ? 0.0 : r;
}

}  // namespace

Gate Gate::rotation(int site, Pauli axis, double angle_deg) {
    Gate g;
    g.kind = Kind::single_rotation;
    g.a = site;
    g.axis = axis;
    g.angle_deg = angle_deg;
    return g;
}

Gate Gate::zz(int site_a, int site_b) {
    Gate g;
    g.kind = Kind::zz_coupling;
    g.a = site_a;
    g.b = site_b;
    g.axis = Pauli::z;
    g.angle_deg = 180.0;
    return g;
}

DenseOperator gate_matrix(const Gate& g, int n_qubits) {
    check_site(g.a, n_qubits);
    if (g.kind == Gate::Kind::single_rotation) {
        if (g.axis != Pauli::x && g.axis != Pauli::y && g.axis != Pauli::z) {
            throw std::invalid_argument("gate_matrix: rotation axis must be x, y or z");
        }
        if (!std::isfinite(g.angle_deg)) throw std::invalid_argument("gate_matrix: angle must be finite");
        const double half = 0.5 * g.angle_deg * std::numbers::pi / 180.0;
        const Eigen::Matrix2cd u =
            std::cos(half) * Eigen::Matrix2cd::Identity() - cplx(0.0, std::sin(half)) * pauli_matrix(g.axis);
        return embed(DenseOperator(1, u), g.a, n_qubits);
    }
    check_site(g.b, n_qubits);
    if (g.a == g.b) throw std::invalid_argument("gate_matrix: zz coupling needs two distinct sites");
    const std::size_t dim = hilbert_dim(n_qubits);
    Matrix u = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < dim; ++i) {
        const int za = 2 * qubit_bit(i, g.a, n_qubits) - 1;
        const int zb = 2 * qubit_bit(i, g.b, n_qubits) - 1;
        const auto k = static_cast<Eigen::Index>(i);
        u(k, k) = std::polar(1.0, -0.25 * std::numbers::pi * za * zb);
    }
    return DenseOperator(n_qubits, std::move(u));
}

PureState apply_gates(const PureState& psi, std::span<const Gate> gates) {
    Vector v = psi.amplitudes();
    for (const Gate& g : gates) v = gate_matrix(g, psi.n_qubits()).matrix() * v;
    return PureState::normalized(psi.n_qubits(), std::move(v));
}

bool equal_up_to_phase(const PureState& a, const PureState& b, double tol) {
    if (a.n_qubits() != b.n_qubits()) return false;
    Eigen::Index k = 0;
    a.amplitudes().cwiseAbs().maxCoeff(&k);
    const cplx bk = b.amplitudes()(k);
    if (std::abs(bk) <= tol) return false;
    const cplx phase = bk / a.amplitudes()(k);
    const cplx unit = phase / std::abs(phase);
    return (unit * a.amplitudes() - b.amplitudes()).cwiseAbs().maxCoeff() <= tol;
}

Eigen::Vector2cd axis_ket(std::string_view name) {
    const double r = 1.0 / std::numbers::sqrt2;
    const cplx i(0.0, 1.0);
    if (name == "1x") return {r, r};
    if (name == "0x") return {-r, r};
    if (name == "1y") return {i * r, r};
    if (name == "0y") return {-i * r, r};
    if (name == "1z") return {0.0, 1.0};
    if (name == "0z") return {1.0, 0.0};
    throw std::invalid_argument("unknown single-qubit ket \"" + std::string(name) + "\"");
}

PureState stage_state(char label) {
    const cplx i(0.0, 1.0);
    const double r2 = 1.0 / std::numbers::sqrt2;
    switch (label) {
        case 'A':
            return superpose(1.0, {{1.0, "1x1z1x0y1z"}});
        case 'B':
            return superpose(r2, {{1.0, "1y1z1z1x1z"}, {-1.0, "1y1z0z0x1z"}});
        case 'C':
            return superpose(r2, {{1.0, "1y0x1z0z1z"}, {1.0, "1y1x0z1z1z"}});
        case 'D':
            return superpose(0.5, {{1.0, "1y0x1z1z0x"},
                                   {1.0, "1y0x1z0z1x"},
                                   {-i, "1y1x0z1z0x"},
                                   {i, "1y1x0z0z1x"}});
        case 'E':
            return superpose(0.5 * r2, {{1.0, "1x0y1z1z1z"},
                                        {1.0, "1x0y1z0z0z"},
                                        {-1.0, "1x1y0z1z1z"},
                                        {1.0, "1x1y0z0z0z"},
                                        {i, "0x0y0z1z0z"},
                                        {i, "0x0y0z0z1z"},
                                        {-i, "0x1y1z1z0z"},
                                        {i, "0x1y1z0z1z"}});
        default:
            throw std::invalid_argument(std::string("unknown stage '") + label + "', expected A..E");
    }
}

StageExpectations expectations_of(const PureState& psi) {
    StageExpectations out;
    for (int n = 1; n <= psi.n_qubits() && n <= kNmrQubits; ++n) {
        const SiteExpectation e = site_expectation(psi, n);
        out.kz[static_cast<std::size_t>(n - 1)] = e.kz;
        out.kplus[static_cast<std::size_t>(n - 1)] = e.kplus;
    }
    return out;
}

StageExpectations stage_expectations(char label) { return expectations_of(stage_state(label)); }

double EntanglementReport::single_value(int site) const {
    for (const auto& b : single)
        if (b.subset.size() == 1 && b.subset[0] == site) return b.value;
    throw std::out_of_range("no single-site entry for site " + std::to_string(site));
}

double EntanglementReport::pair_value(int n, int m) const {
    if (n > m) std::swap(n, m);
    for (const auto& b : pair)
        if (b.subset.size() == 2 && b.subset[0] == n && b.subset[1] == m) return b.value;
    throw std::out_of_range("no pair entry");
}

double EntanglementReport::concurrence_value(int n, int m) const {
    if (n > m) std::swap(n, m);
    for (const auto& p : concurrence)
        if (p.n == n && p.m == m) return p.value;
    throw std::out_of_range("no concurrence entry");
}

const TripleTangle* EntanglementReport::tangle(int a, int b, int c) const {
    std::array<int, 3> key{a, b, c};
    std::sort(key.begin(), key.end());
    for (const auto& t : tangles)
        if (t.sites == key) return &t;
    return nullptr;
}

EntanglementReport entanglement_report(const PureState& psi, char label) {
    const int n = psi.n_qubits();
    EntanglementReport out;
    out.label = label;
    out.expectations = expectations_of(psi);
    for (int a = 1; a <= n; ++a) {
        const std::array<int, 1> s{a};
        out.single.push_back({{a}, iconcurrence(psi, s).value});
    }
    for (int a = 1; a <= n; ++a) {
        for (int b = a + 1; b <= n; ++b) {
            const std::array<int, 2> s{a, b};
            if (n > 2) out.pair.push_back({{a, b}, iconcurrence(psi, s).value});
            out.concurrence.push_back({a, b, concurrence_wootters(partial_trace(psi, s)).c});
        }
    }
    for (int a = 1; a <= n; ++a) {
        for (int b = a + 1; b <= n; ++b) {
            for (int c = b + 1; c <= n; ++c) {
                const std::array<int, 3> s{a, b, c};
                const DensityMatrix rho = partial_trace(psi, s);
                if (rho.purity() >= 1.0 - kPurityTolerance) out.tangles.push_back({s, three_tangle(rho, 1).tau});
            }
        }
    }
    return out;
}

EntanglementReport stage_entanglement(char label) { return entanglement_report(stage_state(label), label); }

std::string reports_to_json(std::span<const EntanglementReport> reports, int indent) {
    using nlohmann::json;
    json stages = json::array();
    for (const auto& r : reports) {
        json kz = json::array();
        json kplus = json::array();
        for (std::size_t i = 0; i < r.expectations.kz.size(); ++i) {
            kz.push_back(round12(r.expectations.kz[i]));
            kplus.push_back({{"re", round12(r.expectations.kplus[i].real())},
                             {"im", round12(r.expectations.kplus[i].imag())}});
        }
        auto bipartitions = [](const std::vector<BipartitionValue>& v) {
            json a = json::array();
            for (const auto& b : v) a.push_back({{"subset", b.subset}, {"value", round12(b.value)}});
            return a;
        };
        json conc = json::array();
        for (const auto& p : r.concurrence) conc.push_back({{"pair", {p.n, p.m}}, {"value", round12(p.value)}});
        json tangles = json::array();
        for (const auto& t : r.tangles) tangles.push_back({{"sites", t.sites}, {"tau", round12(t.tau)}});

        stages.push_back({{"stage", std::string(1, r.label)},
                          {"expectations", {{"kz", kz}, {"kplus", kplus}}},
                          {"iconcurrence", {{"single", bipartitions(r.single)}, {"pair", bipartitions(r.pair)}}},
                          {"concurrence", conc},
                          {"tangles", tangles}});
    }
    const json doc = {{"schema_version", 1}, {"stages", stages}};
    return doc.dump(indent) + "\n";
}

}  // namespace spinent
