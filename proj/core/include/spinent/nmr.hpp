// Five-qubit encoding experiment: gate primitives, the tabulated stage states
// A..E, and their expectation values and entanglement.

#pragma once

#include "spinent/operators.hpp"

#include <array>
#include <span>
#include <string>
#include <vector>

namespace spinent {

struct Gate {
    enum class Kind { single_rotation, zz_coupling };

    Kind kind = Kind::single_rotation;
    int a = 1;
    Pauli axis = Pauli::x;  ///< x, y or z
    double angle_deg = 0.0;
    int b = 0;  ///< second site of a zz coupling

    static Gate rotation(int site, Pauli axis, double angle_deg);
    /// Fixed 180 degree sigma^z sigma^z evolution, exp(-i pi/4 z_a z_b).
    static Gate zz(int site_a, int site_b);
};

/// cos(t/2) I - i sin(t/2) sigma^axis on one site, or the diagonal zz phase.
DenseOperator gate_matrix(const Gate& g, int n_qubits);

PureState apply_gates(const PureState& psi, std::span<const Gate> gates);

/// Compares two kets modulo a global phase fixed on the largest amplitude of `a`.
bool equal_up_to_phase(const PureState& a, const PureState& b, double tol = 1e-10);

inline constexpr int kNmrQubits = 5;

/// Single-qubit ket "1x", "0x", "1y", "0y", "1z" or "0z" as (amp |0>, amp |1>).
Eigen::Vector2cd axis_ket(std::string_view name);

/// Tabulated ket for stage 'A'..'E'.
PureState stage_state(char label);

struct StageExpectations {
    std::array<double, kNmrQubits> kz{};
    std::array<cplx, kNmrQubits> kplus{};
};

StageExpectations stage_expectations(char label);
StageExpectations expectations_of(const PureState& psi);

struct BipartitionValue {
    std::vector<int> subset;  ///< A in C_{A-rest}
    double value = 0.0;
};

struct PairValue {
    int n = 0;
    int m = 0;
    double value = 0.0;
};

struct TripleTangle {
    std::array<int, 3> sites{};
    double tau = 0.0;
};

struct EntanglementReport {
    char label = 'A';
    StageExpectations expectations;
    std::vector<BipartitionValue> single;  ///< every site against the rest
    std::vector<BipartitionValue> pair;    ///< every pair against the rest
    std::vector<PairValue> concurrence;    ///< all pairwise C
    std::vector<TripleTangle> tangles;     ///< triples whose reduction is pure

    double single_value(int site) const;
    double pair_value(int n, int m) const;
    double concurrence_value(int n, int m) const;
    const TripleTangle* tangle(int a, int b, int c) const;
};

EntanglementReport entanglement_report(const PureState& psi, char label);
EntanglementReport stage_entanglement(char label);

/// {"schema_version": 1, "stages": [...]}, numbers rounded to 12 significant digits
/// (magnitudes below 1e-14 written as 0).
std::string reports_to_json(std::span<const EntanglementReport> reports, int indent = 2);

}  // namespace spinent
