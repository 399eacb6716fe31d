#pragma once

// Circuit modules for the squeezed-operator combinations, the forward walk
// preparation, the walk unitary U_H block encoding H' = H / (D * Xi), and
// the Chebyshev circuits T_n(H') built from U_H and the ancilla reflection.

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bosonwalk/circuit.hpp"
#include "bosonwalk/fock.hpp"
#include "bosonwalk/hamiltonian.hpp"

namespace bosonwalk {

/// Circuit module for one combination acting on (s_k, ph_k):
///   1. vanishing occupations flip ph_k to |1>,
///   2. valid occupations rotate ph_k by theta_r = 2 arccos xi_r,
///   3. |Delta| unconditioned increments/decrements shift the occupation.
/// Branches flagged |1>_ph carry wrapped garbage in s_k; the all-zero
/// ancilla projection removes them. When the valid range is empty the
/// module is flips-only.
///
/// The flips cover every register value outside the valid range, including
/// encodings above Lambda_k. Flagging those keeps the projected walk block
/// diagonal between physical states and register garbage, which the
/// Chebyshev products U_H^dag Pi U_H Pi rely on: an unflagged value above
/// Lambda_k would re-enter the physical basis through the arithmetic.
inline Circuit module_for(WKind kind, int mode, int cap, const RegisterLayout& layout) {
    if (mode < 1 || mode > layout.total_momentum) throw std::invalid_argument("module_for: mode out of layout range");
    const auto reg = layout.system_qubit_list(mode);
    const int width = static_cast<int>(reg.size());
    if (cap < 0 || cap >= (1 << width)) throw std::invalid_argument("module_for: cap does not fit subregister");
    Circuit c(layout.total_qubits);
    const int ph = layout.ph_qubit(mode);
    const auto [r_lo, r_hi] = valid_range(kind, cap);
    for (int r = 0; r < (1 << width); ++r)
        if (r < r_lo || r > r_hi)
            c.add(Gate::x(ph, controls_for_value(reg, static_cast<std::uint64_t>(r))));
    for (int r = std::max(r_lo, 0); r <= r_hi; ++r) {
        const double xi = xi_factor(kind, r, cap);
        c.add(Gate::ry(2.0 * std::acos(std::min(1.0, xi)), ph, controls_for_value(reg, static_cast<std::uint64_t>(r))));
    }
    if (r_lo <= r_hi) {
        const int delta = occupation_change(kind);
        const Circuit arith = delta > 0 ? increment(reg) : decrement(reg);
        for (int i = 0; i < std::abs(delta); ++i) c.append(arith);
    }
    return c;
}

/// Forward walk preparation: establishes |1>_ac, diffuses the index
/// register, then for each monomial j (controlled on |j>_id) applies its
/// per-mode modules in ascending mode order, encodes B'_j / Xi on the me
/// register, and flips ac back to |0>. Index slots beyond the monomial
/// count receive no gates and keep ac = |1>.
inline Circuit forward_prep(const HamiltonianSpec& spec, const RegisterLayout& layout) {
    if (layout.monomial_count != spec.monomial_count || layout.total_momentum != spec.params.total_momentum)
        throw std::invalid_argument("forward_prep: layout does not match spec");
    const auto caps = max_occupations(spec.params.total_momentum);
    Circuit c(layout.total_qubits);
    c.add(Gate::x(layout.ac_qubit));
    const auto id_reg = layout.id_qubit_list();
    for (int q : id_reg) c.add(Gate::h(q));
    for (const auto& mono : spec.monomials) {
        Circuit block(layout.total_qubits);
        for (const auto& [mode, kind] : mono.factors)
            block.append(module_for(kind, mode, caps[static_cast<std::size_t>(mode - 1)], layout));
        // me encodes rho_j = |B'_j| / Xi via RotY(2 arccos rho); the phase
        // gate carries beta_j = arg(B'_j), which is 0 for this theory.
        const double rho = std::min(1.0, std::abs(mono.coefficient) / spec.subnormalization);
        const double beta = mono.coefficient < 0.0 ? std::numbers::pi : 0.0;
        if (beta != 0.0) block.add(Gate::phase(beta, layout.me_qubit));
        block.add(Gate::ry(2.0 * std::acos(rho), layout.me_qubit));
        block.add(Gate::x(layout.ac_qubit));
        c.append(controlled(block, controls_for_value(id_reg, static_cast<std::uint64_t>(mono.index))));
    }
    return c;
}

struct WalkCircuits {
    Circuit u_h;
    Circuit u_h_dag;
    Circuit reflection;  // about |0> of {id, ph, me, ac}
    RegisterLayout layout;
    double scale = 0.0;  // D * Xi, MeV^2
};

/// U_H = (backward prep)^dag (forward prep); its all-zero-ancilla block is
/// H / (D * Xi) over the Fock basis. The backward preparation is the index
/// diffusion alone, which is self-inverse.
inline WalkCircuits walk_unitary(const HamiltonianSpec& spec, const RegisterLayout& layout) {
    WalkCircuits walk;
    walk.layout = layout;
    walk.scale = spec.block_encoding_scale();
    walk.u_h = forward_prep(spec, layout);
    for (int q : layout.id_qubit_list()) walk.u_h.add(Gate::h(q));
    walk.u_h_dag = inverse(walk.u_h);
    walk.reflection = reflection_about_zero(layout.ancilla_qubit_list());
    return walk;
}

inline WalkCircuits walk_unitary(const HamiltonianSpec& spec) {
    return walk_unitary(spec, build_layout(spec.params.total_momentum, spec.monomial_count));
}

/// Block encoding of T_n(H'): alternating walk and reflection,
///   odd  n = 2k+1:  U_H Pi (U_H^dag Pi U_H Pi)^k
///   even n = 2k:    (U_H^dag Pi U_H Pi)^k
/// n = 0 gives the empty circuit.
inline Circuit chebyshev_circuit(const WalkCircuits& walk, int order) {
    if (order < 0) throw std::invalid_argument("chebyshev_circuit: order must be >= 0");
    Circuit c(walk.layout.total_qubits);
    for (int m = 0; m < order; ++m) {
        c.append(walk.reflection);
        c.append(m % 2 == 0 ? walk.u_h : walk.u_h_dag);
    }
    return c;
}

}  // namespace bosonwalk
