#pragma once

// Noiseless statevector engine. Multi-controlled gates are applied natively
// by index masking: only amplitudes whose control bits match are touched,
// enumerated through the free-bit subspace.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "bosonwalk/circuit.hpp"
#include "bosonwalk/fock.hpp"

#include <Eigen/Dense>

namespace bosonwalk {

struct StateVector {
    std::vector<std::complex<double>> amplitudes;
    int num_qubits = 0;

    static StateVector zero_state(int num_qubits) {
        StateVector s;
        s.num_qubits = num_qubits;
        s.amplitudes.assign(1ull << num_qubits, 0.0);
        s.amplitudes[0] = 1.0;
        return s;
    }

    double norm() const {
        double sum = 0.0;
        for (const auto& a : amplitudes) sum += std::norm(a);
        return std::sqrt(sum);
    }
};

inline std::complex<double> inner_product(const StateVector& bra, const StateVector& ket) {
    if (bra.num_qubits != ket.num_qubits) throw std::invalid_argument("inner_product: size mismatch");
    std::complex<double> acc = 0.0;
    for (std::size_t i = 0; i < bra.amplitudes.size(); ++i)
        acc += std::conj(bra.amplitudes[i]) * ket.amplitudes[i];
    return acc;
}

/// Pivot description: Fock states with complex weights (normalized on init).
using WeightedStates = std::vector<std::pair<FockState, std::complex<double>>>;

/// |F>_s with every ancilla in |0>.
inline StateVector init_state(const RegisterLayout& layout, const FockState& state) {
    StateVector s;
    s.num_qubits = layout.total_qubits;
    s.amplitudes.assign(1ull << layout.total_qubits, 0.0);
    s.amplitudes[state_index(state, layout)] = 1.0;
    return s;
}

/// Normalized superposition over same-sector basis states, ancillas |0>.
/// Mixing parity sectors is rejected (symmetry-adapted pivots only).
inline StateVector init_state(const RegisterLayout& layout, const WeightedStates& weights) {
    if (weights.empty()) throw std::invalid_argument("init_state: empty weight list");
    const Parity sector = sector_of(weights.front().first);
    double norm2 = 0.0;
    for (const auto& [state, w] : weights) {
        if (sector_of(state) != sector) throw std::invalid_argument("init_state: mixed-sector pivot rejected");
        norm2 += std::norm(w);
    }
    if (norm2 <= 0.0) throw std::invalid_argument("init_state: zero-norm pivot");
    StateVector s;
    s.num_qubits = layout.total_qubits;
    s.amplitudes.assign(1ull << layout.total_qubits, 0.0);
    const double inv = 1.0 / std::sqrt(norm2);
    for (const auto& [state, w] : weights) s.amplitudes[state_index(state, layout)] += w * inv;
    return s;
}

inline void apply_gate(StateVector& state, const Gate& gate) {
    const int n = state.num_qubits;
    if (gate.target < 0 || gate.target >= n) throw std::invalid_argument("apply_gate: target out of range");
    std::uint64_t cmask = 0, cval = 0;
    for (const auto& c : gate.controls) {
        if (c.qubit < 0 || c.qubit >= n) throw std::invalid_argument("apply_gate: control out of range");
        cmask |= 1ull << c.qubit;
        if (c.value) cval |= 1ull << c.qubit;
    }
    const std::uint64_t tbit = 1ull << gate.target;
    std::array<int, 64> free_pos{};
    int free_count = 0;
    for (int b = 0; b < n; ++b) {
        const std::uint64_t bit = 1ull << b;
        if (bit != tbit && !(cmask & bit)) free_pos[static_cast<std::size_t>(free_count++)] = b;
    }
    const std::uint64_t subspace = 1ull << free_count;
    auto* amp = state.amplitudes.data();

    switch (gate.kind) {
        case GateKind::Phase: {
            const std::complex<double> factor = std::polar(1.0, gate.angle);
            for (std::uint64_t c = 0; c < subspace; ++c) {
                std::uint64_t base = cval;
                for (int b = 0; b < free_count; ++b)
                    base |= ((c >> b) & 1ull) << free_pos[static_cast<std::size_t>(b)];
                amp[base] *= factor;  // target bit 0 only
            }
            return;
        }
        case GateKind::PauliX: {
            for (std::uint64_t c = 0; c < subspace; ++c) {
                std::uint64_t base = cval;
                for (int b = 0; b < free_count; ++b)
                    base |= ((c >> b) & 1ull) << free_pos[static_cast<std::size_t>(b)];
                std::swap(amp[base], amp[base | tbit]);
            }
            return;
        }
        case GateKind::Hadamard: {
            constexpr double inv_sqrt2 = 0.7071067811865475244;
            for (std::uint64_t c = 0; c < subspace; ++c) {
                std::uint64_t base = cval;
                for (int b = 0; b < free_count; ++b)
                    base |= ((c >> b) & 1ull) << free_pos[static_cast<std::size_t>(b)];
                const auto a0 = amp[base];
                const auto a1 = amp[base | tbit];
                amp[base] = (a0 + a1) * inv_sqrt2;
                amp[base | tbit] = (a0 - a1) * inv_sqrt2;
            }
            return;
        }
        case GateKind::RotY: {
            const double co = std::cos(0.5 * gate.angle);
            const double si = std::sin(0.5 * gate.angle);
            for (std::uint64_t c = 0; c < subspace; ++c) {
                std::uint64_t base = cval;
                for (int b = 0; b < free_count; ++b)
                    base |= ((c >> b) & 1ull) << free_pos[static_cast<std::size_t>(b)];
                const auto a0 = amp[base];
                const auto a1 = amp[base | tbit];
                amp[base] = co * a0 - si * a1;
                amp[base | tbit] = si * a0 + co * a1;
            }
            return;
        }
    }
}

/// Applies the whole circuit and enforces norm preservation to 1e-10.
inline void run(StateVector& state, const Circuit& circuit) {
    if (circuit.num_qubits() > state.num_qubits)
        throw std::invalid_argument("run: circuit wider than state");
    for (const auto& g : circuit.gates()) apply_gate(state, g);
    const double norm = state.norm();
    if (std::abs(norm - 1.0) > 1e-10)
        throw std::runtime_error("run: norm drifted to " + std::to_string(norm));
}

/// <G, 0_a| circuit |F, 0_a>: single amplitude readout after running the
/// circuit on |F> with zeroed ancillas.
inline std::complex<double> blockencoded_element(const Circuit& circuit, const FockState& input,
                                                 const FockState& output, const RegisterLayout& layout) {
    StateVector state = init_state(layout, input);
    run(state, circuit);
    return state.amplitudes[state_index(output, layout)];
}

/// Full unitary of a small circuit, built column by column. Test-scale only.
inline Eigen::MatrixXcd circuit_unitary(const Circuit& circuit) {
    const int n = circuit.num_qubits();
    if (n > 12) throw std::invalid_argument("circuit_unitary: too many qubits for dense build");
    const std::uint64_t dim = 1ull << n;
    Eigen::MatrixXcd u(dim, dim);
    for (std::uint64_t col = 0; col < dim; ++col) {
        StateVector s;
        s.num_qubits = n;
        s.amplitudes.assign(dim, 0.0);
        s.amplitudes[col] = 1.0;
        for (const auto& g : circuit.gates()) apply_gate(s, g);
        for (std::uint64_t row = 0; row < dim; ++row) u(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = s.amplitudes[row];
    }
    return u;
}

/// Real part of <psi0| circuit |psi0> estimated by the standard Hadamard
/// test: one extra ancilla controls the whole circuit; shots are drawn from
/// a seeded generator, so equal inputs give bit-identical estimates.
inline double hadamard_test_estimate(const Circuit& circuit, const StateVector& pivot, long shots,
                                     std::uint64_t seed) {
    if (shots < 1) throw std::invalid_argument("hadamard_test_estimate: shots must be >= 1");
    const int n = pivot.num_qubits;
    const int ancilla = n;
    StateVector extended;
    extended.num_qubits = n + 1;
    extended.amplitudes.assign(1ull << (n + 1), 0.0);
    std::copy(pivot.amplitudes.begin(), pivot.amplitudes.end(), extended.amplitudes.begin());
    apply_gate(extended, Gate::h(ancilla));
    const Circuit wrapped = controlled(circuit, {{ancilla, 1}});
    for (const auto& g : wrapped.gates()) apply_gate(extended, g);
    apply_gate(extended, Gate::h(ancilla));
    double p0 = 0.0;
    for (std::uint64_t i = 0; i < (1ull << n); ++i) p0 += std::norm(extended.amplitudes[i]);
    p0 = std::min(1.0, std::max(0.0, p0));

    std::mt19937_64 rng(seed);
    long count0 = 0;
    for (long s = 0; s < shots; ++s) {
        // uniform double in [0,1) built from raw bits, pinned across platforms
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        if (u < p0) ++count0;
    }
    return static_cast<double>(2 * count0 - shots) / static_cast<double>(shots);
}

}  // namespace bosonwalk
