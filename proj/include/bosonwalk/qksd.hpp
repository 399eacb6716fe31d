#pragma once

// Symmetry-adapted quantum Krylov subspace diagonalization: assembles the
// projected H' and overlap S from Chebyshev expectations, performs canonical
// orthogonalization, solves the generalized eigenvalue problem, and rescales
// eigenvalues back to MeV^2.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "bosonwalk/block_encoding.hpp"
#include "bosonwalk/hamiltonian.hpp"
#include "bosonwalk/linalg.hpp"
#include "bosonwalk/statevector.hpp"
#include "bosonwalk/walk_simulation.hpp"

#include <Eigen/Dense>

namespace bosonwalk {

/// Krylov-projected matrices built solely from <T_0..T_{2k-1}(H')>_0 via
///   H'_ij = 1/4 [ e_{i+j+1} + e_|i+j-1| + e_|i-j+1| + e_|i-j-1| ]
///   S_ij  = 1/2 [ e_{i+j}   + e_|i-j| ]
/// Physical eigenvalues are recovered as E = eps * scale + shift, where the
/// expectations were taken for the normalized operator (H - shift) / scale.
/// The walk block encoding has scale = D * Xi and shift = 0.
struct KrylovMatrices {
    Eigen::MatrixXd hp;
    Eigen::MatrixXd overlap;
    std::vector<double> expectations;
    double scale = 0.0;  // MeV^2
    double shift = 0.0;  // MeV^2
    int krylov_dim = 0;
};

inline KrylovMatrices build_krylov_matrices(const std::vector<double>& expectations, int krylov_dim, double scale,
                                            double shift = 0.0) {
    if (krylov_dim < 1) throw std::invalid_argument("build_krylov_matrices: Krylov dimension must be >= 1");
    if (expectations.size() < 2 * static_cast<std::size_t>(krylov_dim))
        throw std::invalid_argument("build_krylov_matrices: need expectations up to order 2K-1");
    KrylovMatrices km;
    km.expectations = expectations;
    km.scale = scale;
    km.shift = shift;
    km.krylov_dim = krylov_dim;
    km.hp = Eigen::MatrixXd(krylov_dim, krylov_dim);
    km.overlap = Eigen::MatrixXd(krylov_dim, krylov_dim);
    const auto e = [&](int n) { return expectations[static_cast<std::size_t>(std::abs(n))]; };
    for (int i = 0; i < krylov_dim; ++i) {
        for (int j = 0; j < krylov_dim; ++j) {
            km.hp(i, j) = 0.25 * (e(i + j + 1) + e(i + j - 1) + e(i - j + 1) + e(i - j - 1));
            km.overlap(i, j) = 0.5 * (e(i + j) + e(i - j));
        }
    }
    return km;
}

struct GevpSolution {
    std::vector<double> eigenvalues;  // ascending, MeV^2
    int retained_dim = 0;
    double eps_rel = 0.0;
};

/// Canonical orthogonalization followed by the projected eigenproblem:
/// directions of S below eps_rel * sigma_max are discarded, the remainder is
/// whitened, and the whitened H' is diagonalized.
inline GevpSolution solve_gevp(const KrylovMatrices& km, double eps_rel = 1e-8) {
    const auto overlap_eig = symmetric_eig(km.overlap);
    const double sigma_max = overlap_eig.values(km.krylov_dim - 1);
    if (!(sigma_max > 0.0)) throw std::runtime_error("solve_gevp: overlap matrix has no positive direction");
    std::vector<int> keep;
    for (int i = 0; i < km.krylov_dim; ++i)
        if (overlap_eig.values(i) > eps_rel * sigma_max) keep.push_back(i);
    if (keep.empty()) throw std::runtime_error("solve_gevp: all overlap directions below threshold");
    Eigen::MatrixXd x(km.krylov_dim, static_cast<Eigen::Index>(keep.size()));
    for (std::size_t c = 0; c < keep.size(); ++c)
        x.col(static_cast<Eigen::Index>(c)) =
            overlap_eig.vectors.col(keep[c]) / std::sqrt(overlap_eig.values(keep[c]));
    const Eigen::MatrixXd projected = x.transpose() * km.hp * x;
    const auto eig = symmetric_eig(0.5 * (projected + projected.transpose()));
    GevpSolution sol;
    sol.retained_dim = static_cast<int>(keep.size());
    sol.eps_rel = eps_rel;
    sol.eigenvalues.resize(keep.size());
    for (std::size_t i = 0; i < keep.size(); ++i)
        sol.eigenvalues[i] = eig.values(static_cast<Eigen::Index>(i)) * km.scale + km.shift;
    return sol;
}

enum class ExpectationMode {
    CircuitExact,  // statevector walk circuits, exact projected inner products
    MatrixExact,   // classical Chebyshev recurrence on the oracle matrix
    ShotSampled,   // walk circuits estimated by seeded Hadamard tests
};

/// Normalization used by MatrixExact expectations. BlockEncoding mirrors the
/// walk scale D * Xi; Spectral shifts and scales by a Gershgorin bound on
/// the spectrum, which keeps the Chebyshev moments well conditioned at
/// Krylov dimensions the D * Xi compression cannot support in binary64.
enum class MatrixNormalization { BlockEncoding, Spectral };

struct QksdOptions {
    int krylov_dim = 0;  // 0 -> sector dimension
    ExpectationMode mode = ExpectationMode::CircuitExact;
    MatrixNormalization normalization = MatrixNormalization::BlockEncoding;
    long shots = 100000;
    std::uint64_t seed = 1;
    double eps_rel = 1e-8;
    std::optional<WeightedStates> pivot;  // default: lowest-index sector state
    int max_circuit_qubits = 26;
};

struct QksdResult {
    GevpSolution solution;
    KrylovMatrices matrices;
    WeightedStates pivot;
    Parity sector = Parity::Even;
    int krylov_dim = 0;
    int qubit_count = 0;        // circuit modes only
    std::size_t walk_gate_count = 0;  // gates in one U_H
};

namespace detail {

inline std::uint64_t order_seed(std::uint64_t seed, int order) {
    return seed + 0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(order + 1);
}

inline Eigen::VectorXd pivot_vector(const WeightedStates& pivot, const std::vector<FockState>& basis) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(basis.size()));
    for (const auto& [state, w] : pivot) {
        if (std::abs(w.imag()) > 0.0)
            throw std::invalid_argument("qksd: complex pivot weights require the circuit modes");
        bool found = false;
        for (std::size_t i = 0; i < basis.size(); ++i) {
            if (basis[i] == state) {
                v(static_cast<Eigen::Index>(i)) += w.real();
                found = true;
                break;
            }
        }
        if (!found) throw std::invalid_argument("qksd: pivot state not in basis");
    }
    const double norm = v.norm();
    if (!(norm > 0.0)) throw std::invalid_argument("qksd: zero-norm pivot");
    return v / norm;
}

/// <T_n((H - shift)/scale)>_0 by the three-term recurrence.
inline std::vector<double> matrix_expectations(const Eigen::MatrixXd& h, const Eigen::VectorXd& pivot,
                                               double scale, double shift, int max_order) {
    const Eigen::MatrixXd hp =
        (h - shift * Eigen::MatrixXd::Identity(h.rows(), h.cols())) / scale;
    std::vector<double> e;
    e.reserve(static_cast<std::size_t>(max_order) + 1);
    Eigen::VectorXd prev = pivot;
    e.push_back(pivot.dot(prev));
    if (max_order >= 1) {
        Eigen::VectorXd cur = hp * pivot;
        e.push_back(pivot.dot(cur));
        for (int n = 2; n <= max_order; ++n) {
            Eigen::VectorXd next = 2.0 * (hp * cur) - prev;
            e.push_back(pivot.dot(next));
            prev = std::move(cur);
            cur = std::move(next);
        }
    }
    return e;
}

}  // namespace detail

/// Full SA-QKSD pipeline for one sector: Hamiltonian build, expectation
/// evaluation in the requested mode, Krylov assembly, and the projected
/// eigenproblem. Eigenvalues come back in MeV^2.
inline QksdResult run_qksd(const ModelParams& params, Parity sector, const QksdOptions& options = {}) {
    params.validate();
    const auto basis = enumerate_basis(params.total_momentum);
    const auto sector_ids = sector_indices(basis, sector);
    if (sector_ids.empty()) throw std::invalid_argument("run_qksd: empty sector");

    QksdResult result;
    result.sector = sector;
    result.pivot = options.pivot.value_or(WeightedStates{{basis[static_cast<std::size_t>(sector_ids.front())], 1.0}});
    for (const auto& [state, w] : result.pivot)
        if (sector_of(state) != sector) throw std::invalid_argument("run_qksd: pivot not in requested sector");
    result.krylov_dim = options.krylov_dim > 0 ? options.krylov_dim : static_cast<int>(sector_ids.size());
    const int max_order = 2 * result.krylov_dim - 1;

    const auto spec = build_monomials(params);
    std::vector<double> expectations;
    double scale = spec.block_encoding_scale();
    double shift = 0.0;

    switch (options.mode) {
        case ExpectationMode::CircuitExact:
        case ExpectationMode::ShotSampled: {
            const auto layout = build_layout(params.total_momentum, spec.monomial_count);
            if (layout.total_qubits > options.max_circuit_qubits)
                throw std::invalid_argument("run_qksd: " + std::to_string(layout.total_qubits) +
                                            " qubits exceed the circuit-mode limit; use MatrixExact");
            const auto walk = walk_unitary(spec, layout);
            result.qubit_count = layout.total_qubits;
            result.walk_gate_count = walk.u_h.size();
            const StateVector pivot_state = init_state(layout, result.pivot);
            if (options.mode == ExpectationMode::CircuitExact) {
                expectations = chebyshev_expectation_sweep(walk, pivot_state, max_order);
            } else {
                if (options.shots < 1) throw std::invalid_argument("run_qksd: shots must be >= 1");
                expectations.reserve(static_cast<std::size_t>(max_order) + 1);
                for (int n = 0; n <= max_order; ++n)
                    expectations.push_back(
                        expectation_T_sampled(walk, pivot_state, n, options.shots,
                                              detail::order_seed(options.seed, n)));
            }
            break;
        }
        case ExpectationMode::MatrixExact: {
            const auto h = exact_matrix(spec, basis);
            if (options.normalization == MatrixNormalization::Spectral) {
                double lo = h(0, 0), hi = h(0, 0);
                for (Eigen::Index i = 0; i < h.rows(); ++i) {
                    const double radius = h.row(i).cwiseAbs().sum() - std::abs(h(i, i));
                    lo = std::min(lo, h(i, i) - radius);
                    hi = std::max(hi, h(i, i) + radius);
                }
                shift = 0.5 * (hi + lo);
                const double half = 0.5 * (hi - lo);
                scale = half > 1e-9 * std::max(1.0, std::abs(hi)) ? 1.001 * half : std::max(1.0, std::abs(hi));
            }
            expectations = detail::matrix_expectations(h, detail::pivot_vector(result.pivot, basis), scale,
                                                       shift, max_order);
            break;
        }
    }

    result.matrices = build_krylov_matrices(expectations, result.krylov_dim, scale, shift);
    result.solution = solve_gevp(result.matrices, options.eps_rel);
    return result;
}

/// Convenience wrapper when only the solved eigensystem is needed.
inline GevpSolution qksd_ground_energy(const ModelParams& params, Parity sector, const QksdOptions& options = {}) {
    return run_qksd(params, sector, options).solution;
}

}  // namespace bosonwalk
