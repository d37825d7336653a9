// Nearest-neighbour XXZ Hamiltonians, homogeneous ring and inhomogeneous chain.
//
//   H = 1/2 sum_n J_n (s+_n s-_{n+1} + s-_n s+_{n+1} + Delta/2 sz_n sz_{n+1})
//       - 1/2 sum_n w_n sz_n
//
// Energies are in units of the coupling; k_B = 1.

#pragma once

#include "spinent/operators.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace spinent {

enum class Boundary { periodic, open };

std::string_view to_string(Boundary b);
Boundary boundary_from_string(std::string_view s);

struct ModelSpec {
    int n_qubits = 4;
    Boundary boundary = Boundary::periodic;
    /// One entry per bond: N for periodic, N - 1 for open.
    std::vector<double> couplings;
    double delta = 1.0;
    /// One entry per site.
    std::vector<double> fields;
    /// Periodic N = 2 only: keep a single (1,2) bond instead of the literal
    /// two-term sum.
    bool dedupe_n2 = false;

    /// Periodic ring with uniform coupling `j` and zero field.
    static ModelSpec ring(int n_qubits, double j, double delta);
    /// Open chain with per-bond couplings and per-site fields.
    static ModelSpec chain(std::vector<double> couplings, double delta, std::vector<double> fields);

    /// Throws std::invalid_argument describing the first violated constraint.
    void validate() const;

    bool is_homogeneous() const;
    bool has_zero_field() const;
    /// Periodic, uniform couplings and uniform field: commutes with T(1).
    bool is_translation_invariant() const;
    /// The common coupling of a homogeneous spec (1 when there are no bonds).
    double coupling() const;

    /// Bonds (n, m) in summation order, 1-based.
    std::vector<std::pair<int, int>> bonds() const;

    /// Same spec with every coupling and delta replaced.
    ModelSpec with(double j, double new_delta) const;
};

/// Loads {n_qubits, boundary, couplings, delta, fields[, dedupe_n2]}; unknown
/// keys are rejected.
ModelSpec load_model_spec(const std::filesystem::path& path);
ModelSpec parse_model_spec(std::string_view json_text);
std::string model_spec_to_json(const ModelSpec& spec);

DenseOperator build_hamiltonian(const ModelSpec& spec);

struct SymmetryReport {
    double sz = 0.0;           ///< max-entry norm of [H, S^z]
    double spinflip = 0.0;     ///< [H, F]
    double translation = 0.0;  ///< [H, T(1)]
};

SymmetryReport check_symmetries(const ModelSpec& spec);

/// max-entry norm of A H(J, Delta) A^-1 + H(J, -Delta) for an even periodic
/// homogeneous ring.
double yang_map_check(const ModelSpec& spec);

}  // namespace spinent
