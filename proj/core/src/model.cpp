#include "spinent/model.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace spinent {

using json = nlohmann::json;

std::string_view to_string(Boundary b) { return b == Boundary::periodic ? "periodic" : "open"; }

Boundary boundary_from_string(std::string_view s) {
    if (s == "periodic") return Boundary::periodic;
    if (s == "open") return Boundary::open;
    throw std::invalid_argument("boundary must be \"periodic\" or \"open\", got \"" + std::string(s) + "\"");
}

ModelSpec ModelSpec::ring(int n_qubits, double j, double delta) {
    ModelSpec s;
    s.n_qubits = n_qubits;
    s.boundary = Boundary::periodic;
    s.couplings.assign(static_cast<std::size_t>(std::max(n_qubits, 0)), j);
    s.delta = delta;
    s.fields.assign(static_cast<std::size_t>(std::max(n_qubits, 0)), 0.0);
    s.validate();
    return s;
}

ModelSpec ModelSpec::chain(std::vector<double> couplings, double delta, std::vector<double> fields) {
    ModelSpec s;
    s.n_qubits = static_cast<int>(fields.size());
    s.boundary = Boundary::open;
    s.couplings = std::move(couplings);
    s.delta = delta;
    s.fields = std::move(fields);
    s.validate();
    return s;
}

void ModelSpec::validate() const {
    hilbert_dim(n_qubits);
    const std::size_t n = static_cast<std::size_t>(n_qubits);
    const std::size_t expected = boundary == Boundary::periodic ? n : n - 1;
    if (couplings.size() != expected) {
        throw std::invalid_argument("model: " + std::string(to_string(boundary)) + " boundary with N=" +
                                    std::to_string(n_qubits) + " needs " + std::to_string(expected) +
                                    " couplings, got " + std::to_string(couplings.size()));
    }
    if (fields.size() != n) {
        throw std::invalid_argument("model: expected " + std::to_string(n) + " fields, got " +
                                    std::to_string(fields.size()));
    }
    auto finite = [](double x) { return std::isfinite(x); };
    if (!std::all_of(couplings.begin(), couplings.end(), finite) ||
        !std::all_of(fields.begin(), fields.end(), finite) || !std::isfinite(delta)) {
        throw std::invalid_argument("model: non-finite parameter");
    }
    if (dedupe_n2 && !(n_qubits == 2 && boundary == Boundary::periodic)) {
        throw std::invalid_argument("model: dedupe_n2 applies to the periodic N=2 ring only");
    }
}

bool ModelSpec::is_homogeneous() const {
    return std::adjacent_find(couplings.begin(), couplings.end(), std::not_equal_to<>()) == couplings.end();
}

bool ModelSpec::has_zero_field() const {
    return std::all_of(fields.begin(), fields.end(), [](double w) { return w == 0.0; });
}

bool ModelSpec::is_translation_invariant() const {
    const bool uniform_field =
        std::adjacent_find(fields.begin(), fields.end(), std::not_equal_to<>()) == fields.end();
    return boundary == Boundary::periodic && is_homogeneous() && uniform_field;
}

double ModelSpec::coupling() const { return couplings.empty() ? 1.0 : couplings.front(); }

std::vector<std::pair<int, int>> ModelSpec::bonds() const {
    std::vector<std::pair<int, int>> out;
    if (boundary == Boundary::open) {
        for (int n = 1; n < n_qubits; ++n) out.emplace_back(n, n + 1);
        return out;
    }
    // A single site has no neighbour; the ring degenerates to a free spin.
    if (n_qubits == 1) return out;
    if (n_qubits == 2 && dedupe_n2) {
        out.emplace_back(1, 2);
        return out;
    }
    for (int n = 1; n <= n_qubits; ++n) out.emplace_back(n, n % n_qubits + 1);
    return out;
}

ModelSpec ModelSpec::with(double j, double new_delta) const {
    ModelSpec s = *this;
    std::fill(s.couplings.begin(), s.couplings.end(), j);
    s.delta = new_delta;
    return s;
}

// ---------------------------------------------------------------------------
// JSON config

namespace {

ModelSpec spec_from_json(const json& j) {
    if (!j.is_object()) throw std::invalid_argument("model config: top level must be an object");
    static const std::vector<std::string> known = {"n_qubits", "boundary", "couplings", "delta", "fields",
                                                   "dedupe_n2"};
    for (const auto& [key, _] : j.items()) {
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            throw std::invalid_argument("model config: unknown key \"" + key + "\"");
        }
    }
    for (const char* key : {"n_qubits", "couplings", "delta"}) {
        if (!j.contains(key)) throw std::invalid_argument(std::string("model config: missing key \"") + key + "\"");
    }
    ModelSpec s;
    try {
        s.n_qubits = j.at("n_qubits").get<int>();
        s.boundary = boundary_from_string(j.value("boundary", std::string("periodic")));
        s.couplings = j.at("couplings").get<std::vector<double>>();
        s.delta = j.at("delta").get<double>();
        s.fields = j.contains("fields") ? j.at("fields").get<std::vector<double>>()
                                        : std::vector<double>(static_cast<std::size_t>(std::max(s.n_qubits, 0)), 0.0);
        s.dedupe_n2 = j.value("dedupe_n2", false);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("model config: ") + e.what());
    }
    s.validate();
    return s;
}

}  // namespace

ModelSpec parse_model_spec(std::string_view json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("model config: ") + e.what());
    }
    return spec_from_json(j);
}

ModelSpec load_model_spec(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("model config: cannot open " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_model_spec(buf.str());
}

std::string model_spec_to_json(const ModelSpec& spec) {
    json j;
    j["n_qubits"] = spec.n_qubits;
    j["boundary"] = std::string(to_string(spec.boundary));
    j["couplings"] = spec.couplings;
    j["delta"] = spec.delta;
    j["fields"] = spec.fields;
    if (spec.dedupe_n2) j["dedupe_n2"] = true;
    return j.dump(2);
}

// ---------------------------------------------------------------------------
// Hamiltonian

DenseOperator build_hamiltonian(const ModelSpec& spec) {
    spec.validate();
    const int n = spec.n_qubits;
    const std::size_t d = hilbert_dim(n);
    Matrix h = Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    const auto bonds = spec.bonds();

    for (std::size_t i = 0; i < d; ++i) {
        const auto ii = static_cast<Eigen::Index>(i);
        for (std::size_t b = 0; b < bonds.size(); ++b) {
            const auto [s1, s2] = bonds[b];
            const double j = spec.couplings[b];
            const int z1 = 2 * qubit_bit(i, s1, n) - 1;
            const int z2 = 2 * qubit_bit(i, s2, n) - 1;
            h(ii, ii) += 0.25 * j * spec.delta * z1 * z2;
            // s+ s- + s- s+ swaps antiparallel neighbours with amplitude 1.
            if (z1 != z2) {
                const std::size_t flipped = i ^ ((std::size_t{1} << (n - s1)) | (std::size_t{1} << (n - s2)));
                h(static_cast<Eigen::Index>(flipped), ii) += 0.5 * j;
            }
        }
        for (int s = 1; s <= n; ++s) {
            h(ii, ii) -= 0.5 * spec.fields[static_cast<std::size_t>(s - 1)] * (2 * qubit_bit(i, s, n) - 1);
        }
    }
    return {n, std::move(h)};
}

SymmetryReport check_symmetries(const ModelSpec& spec) {
    const DenseOperator h = build_hamiltonian(spec);
    const int n = spec.n_qubits;
    return {commutator_norm(h, total_sz(n)), commutator_norm(h, spinflip(n)), commutator_norm(h, translation(n, 1))};
}

double yang_map_check(const ModelSpec& spec) {
    spec.validate();
    if (spec.n_qubits % 2 != 0) throw std::invalid_argument("yang_map_check: requires even N");
    if (spec.boundary != Boundary::periodic || !spec.is_homogeneous() || !spec.has_zero_field()) {
        throw std::invalid_argument("yang_map_check: requires a periodic homogeneous zero-field ring");
    }
    const DenseOperator a = yang_A(spec.n_qubits);
    const DenseOperator lhs = a * build_hamiltonian(spec) * a.adjoint();
    const DenseOperator flipped = build_hamiltonian(spec.with(spec.coupling(), -spec.delta));
    return (lhs + flipped).matrix().cwiseAbs().maxCoeff();
}

}  // namespace spinent
