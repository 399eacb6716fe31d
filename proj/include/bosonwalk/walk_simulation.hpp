#pragma once

// Simulator-side evaluation of walk quantities: projected Chebyshev matrix
// elements and the expectation values <T_n(H')>_0 feeding the Krylov build.
// The Chebyshev circuits are nested prefixes of one alternating gate
// sequence, so a sweep evolves a single state and reads every order off it.

#include <complex>
#include <stdexcept>
#include <vector>

#include "bosonwalk/block_encoding.hpp"
#include "bosonwalk/statevector.hpp"

#include <Eigen/Dense>

namespace bosonwalk {

namespace detail {
inline double real_checked(std::complex<double> value, const char* who) {
    if (std::abs(value.imag()) > 1e-10)
        throw std::runtime_error(std::string(who) + ": imaginary residue " + std::to_string(value.imag()));
    return value.real();
}

/// Advances the evolving state from T_m to T_{m+1}.
inline void advance_chebyshev(StateVector& state, const WalkCircuits& walk, int m) {
    run(state, walk.reflection);
    run(state, m % 2 == 0 ? walk.u_h : walk.u_h_dag);
}
}  // namespace detail

/// <psi0| T_n(H') |psi0> for a normalized pivot over the walk layout.
inline double expectation_T(const WalkCircuits& walk, const StateVector& pivot, int order) {
    if (order < 0) throw std::invalid_argument("expectation_T: order must be >= 0");
    StateVector state = pivot;
    for (int m = 0; m < order; ++m) detail::advance_chebyshev(state, walk, m);
    return detail::real_checked(inner_product(pivot, state), "expectation_T");
}

/// All expectations <T_0..T_max(H')>_0 from one incremental sweep.
inline std::vector<double> chebyshev_expectation_sweep(const WalkCircuits& walk, const StateVector& pivot,
                                                       int max_order) {
    if (max_order < 0) throw std::invalid_argument("chebyshev_expectation_sweep: negative order");
    std::vector<double> e;
    e.reserve(static_cast<std::size_t>(max_order) + 1);
    e.push_back(detail::real_checked(inner_product(pivot, pivot), "chebyshev_expectation_sweep"));
    StateVector state = pivot;
    for (int m = 0; m < max_order; ++m) {
        detail::advance_chebyshev(state, walk, m);
        e.push_back(detail::real_checked(inner_product(pivot, state), "chebyshev_expectation_sweep"));
    }
    return e;
}

/// Projected matrices <G, 0_a| T_n |F, 0_a> over the given basis for every
/// n = 0..max_order. One evolving state per starting column.
inline std::vector<Eigen::MatrixXd> chebyshev_projected_sweep(const WalkCircuits& walk,
                                                              const std::vector<FockState>& basis,
                                                              int max_order) {
    const auto dim = static_cast<Eigen::Index>(basis.size());
    std::vector<Eigen::MatrixXd> mats(static_cast<std::size_t>(max_order) + 1,
                                      Eigen::MatrixXd::Zero(dim, dim));
    mats[0] = Eigen::MatrixXd::Identity(dim, dim);
    std::vector<std::uint64_t> row_index(basis.size());
    for (std::size_t g = 0; g < basis.size(); ++g) row_index[g] = state_index(basis[g], walk.layout);
    for (std::size_t f = 0; f < basis.size(); ++f) {
        StateVector state = init_state(walk.layout, basis[f]);
        for (int m = 0; m < max_order; ++m) {
            detail::advance_chebyshev(state, walk, m);
            for (std::size_t g = 0; g < basis.size(); ++g)
                mats[static_cast<std::size_t>(m) + 1](static_cast<Eigen::Index>(g), static_cast<Eigen::Index>(f)) =
                    detail::real_checked(state.amplitudes[row_index[g]], "chebyshev_projected_sweep");
        }
    }
    return mats;
}

/// Shot-based counterpart of expectation_T via the Hadamard test.
inline double expectation_T_sampled(const WalkCircuits& walk, const StateVector& pivot, int order, long shots,
                                    std::uint64_t seed) {
    return hadamard_test_estimate(chebyshev_circuit(walk, order), pivot, shots, seed);
}

}  // namespace bosonwalk
