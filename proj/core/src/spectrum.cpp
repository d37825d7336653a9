#include "spinent/spectrum.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace spinent {

namespace {

std::size_t rotate_right(std::size_t i, int n) { return (i >> 1) | ((i & 1U) << (n - 1)); }

// T(1) applied to every column of w.
Matrix apply_translation(const Matrix& w, int n) {
    Matrix out(w.rows(), w.cols());
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
        out.row(static_cast<Eigen::Index>(rotate_right(static_cast<std::size_t>(i), n))) = w.row(i);
    }
    return out;
}

// Groups the columns of `block` by the eigenvalues of block^dagger A block,
// where `project` computes A block. Eigenvalues are integers by construction.
struct Regrouped {
    std::vector<int> values;
    Matrix vectors;
};

template <typename ApplyOp>
Regrouped diagonalize_in_subspace(const Matrix& block, ApplyOp&& apply) {
    const Matrix reduced = block.adjoint() * apply(block);
    const Matrix herm = 0.5 * (reduced + reduced.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(herm);
    Regrouped out;
    out.vectors = block * es.eigenvectors();
    for (Eigen::Index c = 0; c < es.eigenvalues().size(); ++c) {
        out.values.push_back(static_cast<int>(std::lround(es.eigenvalues()(c))));
    }
    return out;
}

// Gram-Schmidt after zeroing amplitudes outside sector s.
void project_to_sector(Matrix& cols, int s, int n) {
    for (Eigen::Index i = 0; i < cols.rows(); ++i) {
        if (sz_of_index(static_cast<std::size_t>(i), n) != s) cols.row(i).setZero();
    }
    for (Eigen::Index c = 0; c < cols.cols(); ++c) {
        for (Eigen::Index p = 0; p < c; ++p) {
            cols.col(c) -= cols.col(p).dot(cols.col(c)) * cols.col(p);
        }
        cols.col(c).normalize();
    }
}

void fix_phase(Eigen::Ref<Vector> v) {
    const double peak = v.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v(i)) >= peak - 1e-9) {
            v *= std::conj(v(i)) / std::abs(v(i));
            v(i) = std::abs(v(i));
            return;
        }
    }
}

// Within s = 0, columns sharing a momentum label are rotated onto F = +-1.
void resolve_spinflip(Matrix& sub, const std::vector<std::optional<int>>& ks, int n) {
    const std::size_t mask = hilbert_dim(n) - 1;
    auto apply_flip = [&](const Matrix& w) -> Matrix {
        Matrix out(w.rows(), w.cols());
        for (Eigen::Index i = 0; i < w.rows(); ++i) {
            out.row(static_cast<Eigen::Index>(~static_cast<std::size_t>(i) & mask)) = w.row(i);
        }
        return out;
    };
    std::vector<bool> done(ks.size(), false);
    for (std::size_t c = 0; c < ks.size(); ++c) {
        if (done[c]) continue;
        std::vector<Eigen::Index> group;
        for (std::size_t o = c; o < ks.size(); ++o) {
            if (ks[o] == ks[c]) {
                group.push_back(static_cast<Eigen::Index>(o));
                done[o] = true;
            }
        }
        if (group.size() < 2) continue;
        Matrix g(sub.rows(), static_cast<Eigen::Index>(group.size()));
        for (std::size_t i = 0; i < group.size(); ++i) g.col(static_cast<Eigen::Index>(i)) = sub.col(group[i]);
        const Regrouped by_f = diagonalize_in_subspace(g, apply_flip);
        for (std::size_t i = 0; i < group.size(); ++i) sub.col(group[i]) = by_f.vectors.col(static_cast<Eigen::Index>(i));
    }
}

struct Entry {
    std::size_t block;
    double energy;
    SectorLabel label;
    Vector vec;
};

}  // namespace

SpectrumResult::SpectrumResult(int n_qubits, double energy_unit, Eigen::VectorXd energies, Matrix vectors,
                               std::vector<SectorLabel> labels)
    : n_qubits_(n_qubits),
      energy_unit_(energy_unit),
      energies_(std::move(energies)),
      vectors_(std::move(vectors)),
      labels_(std::move(labels)) {
    const auto d = static_cast<Eigen::Index>(hilbert_dim(n_qubits));
    if (energies_.size() != d || vectors_.rows() != d || vectors_.cols() != d ||
        labels_.size() != static_cast<std::size_t>(d)) {
        throw std::invalid_argument("SpectrumResult: inconsistent sizes");
    }
}

PureState SpectrumResult::state(std::size_t j) const {
    return PureState::normalized(n_qubits_, vectors_.col(static_cast<Eigen::Index>(j)));
}

double SpectrumResult::max_residual(const DenseOperator& h) const {
    const Matrix hv = h.matrix() * vectors_;
    const Matrix ev = vectors_ * energies_.cast<cplx>().asDiagonal();
    return (hv - ev).cwiseAbs().maxCoeff();
}

double SpectrumResult::orthonormality_error() const {
    return max_entry_distance(vectors_.adjoint() * vectors_, Matrix::Identity(vectors_.cols(), vectors_.cols()));
}

SpectrumResult diagonalize(const ModelSpec& spec) {
    const DenseOperator h = build_hamiltonian(spec);
    const int n = spec.n_qubits;
    const Eigen::Index d = h.dim();

    Eigen::VectorXd evals;
    Matrix evecs;
    if (h.matrix().imag().cwiseAbs().maxCoeff() == 0.0) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.matrix().real());
        evals = es.eigenvalues();
        evecs = es.eigenvectors().cast<cplx>();
    } else {
        Eigen::SelfAdjointEigenSolver<Matrix> es(h.matrix());
        evals = es.eigenvalues();
        evecs = es.eigenvectors();
    }

    const double range = evals(d - 1) - evals(0);
    const double tol = 1e-9 * std::max(1.0, range);
    const bool translational = spec.is_translation_invariant() && n >= 2;
    const bool spin_flip_symmetric = spec.has_zero_field();

    Eigen::VectorXd sz_diag(d);
    for (Eigen::Index i = 0; i < d; ++i) sz_diag(i) = sz_of_index(static_cast<std::size_t>(i), n);

    std::vector<Entry> entries;
    entries.reserve(static_cast<std::size_t>(d));
    std::size_t block_id = 0;
    for (Eigen::Index start = 0; start < d; ++block_id) {
        Eigen::Index stop = start + 1;
        while (stop < d && evals(stop) - evals(stop - 1) <= tol) ++stop;
        const Matrix block = evecs.middleCols(start, stop - start);

        const Regrouped by_sz = diagonalize_in_subspace(
            block, [&](const Matrix& w) -> Matrix { return sz_diag.cast<cplx>().asDiagonal() * w; });

        std::vector<int> sectors = by_sz.values;
        std::sort(sectors.begin(), sectors.end());
        sectors.erase(std::unique(sectors.begin(), sectors.end()), sectors.end());

        for (int s : sectors) {
            std::vector<Eigen::Index> cols;
            for (Eigen::Index c = 0; c < static_cast<Eigen::Index>(by_sz.values.size()); ++c) {
                if (by_sz.values[static_cast<std::size_t>(c)] == s) cols.push_back(c);
            }
            Matrix sub(d, static_cast<Eigen::Index>(cols.size()));
            for (std::size_t c = 0; c < cols.size(); ++c) sub.col(static_cast<Eigen::Index>(c)) = by_sz.vectors.col(cols[c]);
            project_to_sector(sub, s, n);

            std::vector<std::optional<int>> ks(cols.size());
            if (translational) {
                // K = sum_k k P_k with P_k = (1/N) sum_l exp(2 pi i k l / N) T^l.
                auto apply_momentum = [&](const Matrix& w) -> Matrix {
                    std::vector<Matrix> shifted{w};
                    for (int l = 1; l < n; ++l) shifted.push_back(apply_translation(shifted.back(), n));
                    Matrix acc = Matrix::Zero(w.rows(), w.cols());
                    for (int k = 1; k < n; ++k) {
                        for (int l = 0; l < n; ++l) {
                            const double phase = 2.0 * std::numbers::pi * k * l / n;
                            acc += (static_cast<double>(k) / n) * cplx{std::cos(phase), std::sin(phase)} *
                                   shifted[static_cast<std::size_t>(l)];
                        }
                    }
                    return acc;
                };
                Regrouped by_k = diagonalize_in_subspace(sub, apply_momentum);
                sub = std::move(by_k.vectors);
                for (std::size_t c = 0; c < ks.size(); ++c) ks[c] = by_k.values[c];
            }
            if (s == 0 && spin_flip_symmetric && sub.cols() > 1) resolve_spinflip(sub, ks, n);

            for (Eigen::Index c = 0; c < sub.cols(); ++c) {
                Vector v = sub.col(c);
                fix_phase(v);
                const double e = v.dot(h.matrix() * v).real();
                entries.push_back({block_id, e, SectorLabel{s, ks[static_cast<std::size_t>(c)]}, std::move(v)});
            }
        }
        start = stop;
    }

    std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        if (a.block != b.block) return a.block < b.block;
        if (a.label.s != b.label.s) return a.label.s < b.label.s;
        return a.label.k.value_or(-1) < b.label.k.value_or(-1);
    });

    // Report a single energy per degenerate block.
    Eigen::VectorXd energies(d);
    Matrix vectors(d, d);
    std::vector<SectorLabel> labels;
    labels.reserve(entries.size());
    for (std::size_t i = 0; i < entries.size();) {
        std::size_t j = i;
        double sum = 0.0;
        while (j < entries.size() && entries[j].block == entries[i].block) sum += entries[j++].energy;
        const double mean = sum / static_cast<double>(j - i);
        for (std::size_t q = i; q < j; ++q) {
            energies(static_cast<Eigen::Index>(q)) = mean;
            vectors.col(static_cast<Eigen::Index>(q)) = entries[q].vec;
            labels.push_back(entries[q].label);
        }
        i = j;
    }
    return {n, spec.coupling(), std::move(energies), std::move(vectors), std::move(labels)};
}

Eigen::VectorXd eigenvalues(const ModelSpec& spec) {
    const DenseOperator h = build_hamiltonian(spec);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.matrix().real(), Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

double log_partition_function(const Eigen::VectorXd& energies, double beta) {
    if (!(beta >= 0.0)) throw std::invalid_argument("partition_function: beta must be >= 0");
    const double e0 = energies.minCoeff();
    double sum = 0.0;
    for (Eigen::Index j = 0; j < energies.size(); ++j) sum += std::exp(-beta * (energies(j) - e0));
    return -beta * e0 + std::log(sum);
}

Eigen::VectorXd thermal_weights(const Eigen::VectorXd& energies, double beta) {
    if (!(beta >= 0.0)) throw std::invalid_argument("thermal weights: beta must be >= 0");
    const double e0 = energies.minCoeff();
    Eigen::VectorXd w(energies.size());
    for (Eigen::Index j = 0; j < energies.size(); ++j) w(j) = std::exp(-beta * (energies(j) - e0));
    return w / w.sum();
}

ThermalContext partition_function(const SpectrumResult& spectrum, double beta) {
    ThermalContext ctx;
    ctx.beta = beta;
    ctx.temperature = beta > 0.0 ? 1.0 / beta : std::numeric_limits<double>::infinity();
    ctx.log_z = log_partition_function(spectrum.energies(), beta);
    ctx.z = std::exp(ctx.log_z);
    ctx.zeta = std::exp(beta * spectrum.energy_unit());
    ctx.ground_energy = spectrum.energies().minCoeff();
    return ctx;
}

DensityMatrix thermal_state(const SpectrumResult& spectrum, double beta) {
    const Eigen::VectorXd w = thermal_weights(spectrum.energies(), beta);
    const Matrix& v = spectrum.vectors();
    Matrix rho = v * w.cast<cplx>().asDiagonal() * v.adjoint();
    rho = 0.5 * (rho + rho.adjoint()).eval();
    return DensityMatrix::trusted(spectrum.n_qubits(), std::move(rho));
}

DensityMatrix thermal_state_in_sector(const SpectrumResult& spectrum, double beta, int s) {
    if (!(beta >= 0.0)) throw std::invalid_argument("thermal_state_in_sector: beta must be >= 0");
    std::vector<Eigen::Index> members;
    for (std::size_t j = 0; j < spectrum.size(); ++j) {
        if (spectrum.label(j).s == s) members.push_back(static_cast<Eigen::Index>(j));
    }
    if (members.empty()) throw std::invalid_argument("thermal_state_in_sector: no eigenstates with this s");
    Eigen::VectorXd e(static_cast<Eigen::Index>(members.size()));
    for (std::size_t q = 0; q < members.size(); ++q) e(static_cast<Eigen::Index>(q)) = spectrum.energies()(members[q]);
    const Eigen::VectorXd w = thermal_weights(e, beta);
    const Eigen::Index d = spectrum.vectors().rows();
    Matrix rho = Matrix::Zero(d, d);
    for (std::size_t q = 0; q < members.size(); ++q) {
        const auto& col = spectrum.vectors().col(members[q]);
        rho += w(static_cast<Eigen::Index>(q)) * col * col.adjoint();
    }
    return DensityMatrix::trusted(spectrum.n_qubits(), std::move(rho));
}

}  // namespace spinent
