// Acceptance suite: end-to-end checks of the published K=4 numbers, the
// block-encoding and Chebyshev identities, the hybrid SA-QKSD pipeline, the
// critical-coupling scan, the property suite, and scaling sanity at K=8.
// Prints one pass/fail line per criterion; exit status is the failure count.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <future>
#include <iostream>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "bosonwalk/block_encoding.hpp"
#include "bosonwalk/circuit.hpp"
#include "bosonwalk/fock.hpp"
#include "bosonwalk/hamiltonian.hpp"
#include "bosonwalk/qksd.hpp"
#include "bosonwalk/statevector.hpp"
#include "bosonwalk/walk_simulation.hpp"

using namespace bosonwalk;

namespace {

int g_failures = 0;

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void criterion(int number, const std::string& name, double budget_seconds, const std::function<void()>& body) {
    const auto start = std::chrono::steady_clock::now();
    std::string failure;
    try {
        body();
    } catch (const std::exception& e) {
        failure = e.what();
    }
    const double elapsed = seconds_since(start);
    if (failure.empty() && elapsed > budget_seconds)
        failure = "runtime " + std::to_string(elapsed) + " s exceeds budget " + std::to_string(budget_seconds) + " s";
    if (failure.empty()) {
        std::printf("[PASS] criterion %d: %s (%.2f s)\n", number, name.c_str(), elapsed);
    } else {
        std::printf("[FAIL] criterion %d: %s (%.2f s) -- %s\n", number, name.c_str(), elapsed, failure.c_str());
        ++g_failures;
    }
    std::fflush(stdout);
}

void require(bool condition, const std::string& what) {
    if (!condition) throw std::runtime_error(what);
}

void require_close(double actual, double expected, double tol, const std::string& what) {
    if (std::abs(actual - expected) > tol)
        throw std::runtime_error(what + ": got " + std::to_string(actual) + ", expected " +
                                 std::to_string(expected) + " within " + std::to_string(tol));
}

constexpr double kCoupling = 92.4746;

Eigen::MatrixXd reference_k4_matrix() {
    // printed 5x5 block matrix, even sector first
    Eigen::MatrixXd m(5, 5);
    m << 3.78630, 1.50213, 3.46902, 0, 0,
         1.50213, 1.91986, 0, 0, 0,
         3.46902, 0, 26.0767, 0, 0,
         0, 0, 0, 0.25, 1.83972,
         0, 0, 0, 1.83972, 13.5383;
    return m;
}

// basis order used here: {4^1},{3^1 1^1},{2^2},{2^1 1^2},{1^4};
// the reference matrix lists the even block first
const std::vector<int> kEvenBlockFirst{1, 2, 4, 0, 3};

}  // namespace

int main() {
    const auto suite_start = std::chrono::steady_clock::now();

    criterion(1, "coefficient table reproduction at K=4", 1.0, [] {
        const auto spec = build_monomials({1.0, kCoupling, 4});
        require(spec.monomial_count == 14, "expected 14 monomials");
        const std::map<std::string, double> expected = {
            {"(+-)_1", 4.0},           {"(+-)_2", 1.0},
            {"(+-)_3", 1.0 / 3.0},     {"(+-)_4", 0.25},
            {"(++--)_1", 29.4356},     {"(+-)_1(+-)_2", 29.4356},
            {"(+-)_1(+-)_3", 9.81186}, {"(-)_1(++)_2(-)_3", 4.24866},
            {"(+)_1(--)_2(+)_3", 4.24866}, {"(++--)_2", 1.83972},
            {"(---)_1(+)_3", 5.66488}, {"(--)_1(-)_2(+)_4", 7.35889},
            {"(+++)_1(-)_3", 5.66488}, {"(++)_1(+)_2(-)_4", 7.35889},
        };
        std::map<std::string, double> built;
        for (const auto& m : spec.monomials) {
            require(!built.count(m.to_string()), "duplicate factor list " + m.to_string());
            built[m.to_string()] = m.coefficient;
        }
        for (const auto& [factors, coefficient] : expected) {
            require(built.count(factors) == 1, "missing monomial " + factors);
            require_close(built.at(factors), coefficient, 1e-4, factors);
        }
        require_close(spec.subnormalization, 29.4356, 1e-4, "subnormalization");
    });

    criterion(2, "printed 5x5 matrix reproduction", 1.0, [] {
        const auto basis = enumerate_basis(4);
        const auto h = exact_matrix(build_monomials({1.0, kCoupling, 4}), basis);
        const auto reference = reference_k4_matrix();
        for (int i = 0; i < 5; ++i)
            for (int j = 0; j < 5; ++j)
                require_close(h(kEvenBlockFirst[static_cast<std::size_t>(i)], kEvenBlockFirst[static_cast<std::size_t>(j)]),
                              reference(i, j), 1e-4,
                              "entry (" + std::to_string(i) + "," + std::to_string(j) + ")");
        for (int i : {1, 2, 4})
            for (int j : {0, 3})
                require(h(i, j) == 0.0 && h(j, i) == 0.0, "cross-sector entry not exactly zero");
    });

    criterion(3, "eigenvalue reproduction", 1.0, [] {
        const auto basis = enumerate_basis(4);
        const auto values = exact_spectrum(exact_matrix(build_monomials({1.0, kCoupling, 4}), basis));
        require(values.size() == 5, "expected five eigenvalues");
        require_close(values(0), 1.61752e-7, 1e-5, "E0");
        require_close(values(1), 0.958969, 1e-4, "E1");
        require_close(values(2), 4.21772, 1e-4, "E2");
        require_close(values(3), 13.7883, 1e-4, "E3");
        require_close(values(4), 26.6062, 1e-4, "E4");
    });

    criterion(4, "block-encoding identity for K=2,3,4", 30.0, [] {
        for (int k : {2, 3, 4}) {
            for (double coupling : {1.0, 10.0, kCoupling}) {
                const auto spec = build_monomials({1.0, coupling, k});
                const auto walk = walk_unitary(spec);
                const auto basis = enumerate_basis(k);
                const auto h = exact_matrix(spec, basis);
                if (k == 4)
                    require(walk.layout.total_qubits == 17, "K=4 walk must use exactly 17 qubits");
                for (std::size_t f = 0; f < basis.size(); ++f) {
                    StateVector state = init_state(walk.layout, basis[f]);
                    run(state, walk.u_h);
                    for (std::size_t g = 0; g < basis.size(); ++g) {
                        const auto element = state.amplitudes[state_index(basis[g], walk.layout)];
                        require_close(walk.scale * element.real(),
                                      h(static_cast<Eigen::Index>(g), static_cast<Eigen::Index>(f)), 1e-10,
                                      "K=" + std::to_string(k) + " pair residual");
                        require(std::abs(element.imag()) < 1e-12, "imaginary residue");
                    }
                }
            }
        }
    });

    criterion(5, "chebyshev equivalence at K=4 for n<=8", 120.0, [] {
        const auto spec = build_monomials({1.0, kCoupling, 4});
        const auto walk = walk_unitary(spec);
        const auto basis = enumerate_basis(4);
        const Eigen::MatrixXd hp = exact_matrix(spec, basis) / spec.block_encoding_scale();
        const auto projected = chebyshev_projected_sweep(walk, basis, 8);
        std::vector<Eigen::MatrixXd> recurrence(9);
        recurrence[0] = Eigen::MatrixXd::Identity(5, 5);
        recurrence[1] = hp;
        for (int n = 2; n <= 8; ++n)
            recurrence[static_cast<std::size_t>(n)] =
                2.0 * hp * recurrence[static_cast<std::size_t>(n - 1)] - recurrence[static_cast<std::size_t>(n - 2)];
        for (int n = 0; n <= 8; ++n) {
            const double residual =
                (projected[static_cast<std::size_t>(n)] - recurrence[static_cast<std::size_t>(n)])
                    .cwiseAbs()
                    .maxCoeff();
            require(residual <= 1e-10, "order " + std::to_string(n) + " residual " + std::to_string(residual));
        }
    });

    criterion(6, "hybrid SA-QKSD end-to-end at K=4", 120.0, [] {
        const ModelParams params{1.0, kCoupling, 4};

        QksdOptions odd;
        odd.krylov_dim = 2;
        const auto odd_result = run_qksd(params, Parity::Odd, odd);
        require_close(odd_result.solution.eigenvalues.front(), 1.61752e-7, 1e-5, "odd-sector ground energy");

        // extra Chebyshev moments stabilize the ill-conditioned even overlap
        QksdOptions even;
        even.krylov_dim = 8;
        const auto even_result = run_qksd(params, Parity::Even, even);
        require_close(even_result.solution.eigenvalues.front(), 0.958969, 1e-4, "even-sector ground energy");

        // both runs agree with direct diagonalization of the sector blocks
        const auto basis = enumerate_basis(4);
        const auto h = exact_matrix(build_monomials(params), basis);
        const auto odd_exact = exact_spectrum(submatrix(h, sector_indices(basis, Parity::Odd)));
        const auto even_exact = exact_spectrum(submatrix(h, sector_indices(basis, Parity::Even)));
        require_close(odd_result.solution.eigenvalues.front(), odd_exact(0), 1e-5, "odd vs classical");
        require_close(even_result.solution.eigenvalues.front(), even_exact(0), 1e-4, "even vs classical");
    });

    criterion(7, "critical-coupling bisection", 10.0, [] {
        const double critical = find_critical_coupling(4, Parity::Odd, 80.0, 100.0, 1e-3);
        require_close(critical, kCoupling, 0.01, "critical coupling");
    });

    criterion(8, "property suite", 120.0, [] {
        // adder/subtractor exhaustive round trips for n <= 4
        for (int n = 1; n <= 4; ++n) {
            std::vector<int> reg(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i) reg[static_cast<std::size_t>(i)] = i;
            const auto inc = increment(reg), dec = decrement(reg);
            for (std::uint64_t r = 0; r < (1ull << n); ++r) {
                StateVector s = StateVector::zero_state(n);
                s.amplitudes[0] = 0.0;
                s.amplitudes[r] = 1.0;
                run(s, inc);
                require(std::abs(s.amplitudes[(r + 1) % (1ull << n)] - 1.0) < 1e-12, "increment action");
                run(s, dec);
                require(std::abs(s.amplitudes[r] - 1.0) < 1e-12, "round trip");
            }
        }

        // unitarity of the emitted circuit families on small registers
        const auto unitary_ok = [](const Circuit& c) {
            const auto u = circuit_unitary(c);
            return (u.adjoint() * u - Eigen::MatrixXcd::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff() < 1e-12;
        };
        require(unitary_ok(increment({0, 1, 2})), "increment unitary");
        require(unitary_ok(decrement({0, 1, 2, 3})), "decrement unitary");
        require(unitary_ok(reflection_about_zero({0, 1, 2})), "reflection unitary");
        const auto k1 = build_monomials({1.0, 5.0, 1});
        const auto k1_layout = build_layout(1, k1.monomial_count);
        require(unitary_ok(module_for(WKind::Plus, 1, 1, k1_layout)), "module unitary");
        require(unitary_ok(module_for(WKind::PlusMinus, 1, 1, k1_layout)), "module unitary");
        require(unitary_ok(walk_unitary(k1, k1_layout).u_h), "K=1 walk unitary");

        // norm preservation through a deep circuit
        const auto spec = build_monomials({1.0, kCoupling, 4});
        const auto walk = walk_unitary(spec);
        auto state = init_state(walk.layout, FockState({{2, 1}, {1, 2}}, 4));
        run(state, chebyshev_circuit(walk, 5));
        require(std::abs(state.norm() - 1.0) < 1e-10, "norm drift");

        // sector confinement of QKSD
        const auto basis = enumerate_basis(4);
        const auto h = exact_matrix(spec, basis);
        const auto odd_exact = exact_spectrum(submatrix(h, sector_indices(basis, Parity::Odd)));
        const auto even_exact = exact_spectrum(submatrix(h, sector_indices(basis, Parity::Even)));
        QksdOptions odd_options;
        odd_options.krylov_dim = 2;
        const auto qksd = run_qksd({1.0, kCoupling, 4}, Parity::Odd, odd_options);
        for (double value : qksd.solution.eigenvalues) {
            double to_odd = 1e300, to_even = 1e300;
            for (Eigen::Index i = 0; i < odd_exact.size(); ++i)
                to_odd = std::min(to_odd, std::abs(value - odd_exact(i)));
            for (Eigen::Index i = 0; i < even_exact.size(); ++i)
                to_even = std::min(to_even, std::abs(value - even_exact(i)));
            require(to_odd < 1e-6 && to_odd < to_even, "sector confinement");
        }

        // Hadamard-test estimator within 5/sqrt(shots) of the exact value
        const auto pivot = init_state(walk.layout, FockState({{4, 1}}, 4));
        const double exact = expectation_T(walk, pivot, 2);
        const long shots = 100000;
        const double estimate = hadamard_test_estimate(chebyshev_circuit(walk, 2), pivot, shots, 42);
        require(std::abs(estimate - exact) <= 5.0 / std::sqrt(static_cast<double>(shots)), "estimator bound");
        require(hadamard_test_estimate(chebyshev_circuit(walk, 2), pivot, shots, 42) == estimate,
                "seeded determinism");

        // scan evaluation is bit-identical for any worker count
        const auto scan_with_workers = [](int workers) {
            const int points = 9;
            std::vector<double> lowest(points);
            std::vector<std::future<void>> futures;
            for (int w = 0; w < workers; ++w)
                futures.push_back(std::async(std::launch::async, [&, w] {
                    for (int i = w; i < points; i += workers)
                        lowest[static_cast<std::size_t>(i)] =
                            lowest_sector_eigenvalue(3, Parity::Odd, 1.0 + 3.0 * i, 1.0);
                }));
            for (auto& f : futures) f.get();
            return lowest;
        };
        require(scan_with_workers(1) == scan_with_workers(4), "worker-count determinism");
    });

    criterion(9, "scaling sanity at K=8", 600.0, [&] {
        const ModelParams params{1.0, 10.0, 8};
        const auto basis = enumerate_basis(8);
        require(basis.size() == 22, "K=8 basis size");
        const auto h = exact_matrix(build_monomials(params), basis);
        for (Parity sector : {Parity::Odd, Parity::Even}) {
            const auto ids = sector_indices(basis, sector);
            const auto exact = exact_spectrum(submatrix(h, ids));
            WeightedStates uniform;
            for (int id : ids) uniform.emplace_back(basis[static_cast<std::size_t>(id)], 1.0);
            QksdOptions options;
            options.mode = ExpectationMode::MatrixExact;
            options.normalization = MatrixNormalization::Spectral;
            options.krylov_dim = 2 * static_cast<int>(ids.size());
            options.pivot = uniform;
            const auto result = run_qksd(params, sector, options);
            require(result.solution.retained_dim == static_cast<int>(ids.size()),
                    "retained dimension must equal the sector dimension");
            const double relative = std::abs(result.solution.eigenvalues.front() - exact(0)) / std::abs(exact(0));
            require(relative <= 1e-8, std::string(to_string(sector)) + " sector relative error " +
                                          std::to_string(relative));
        }

        // gate totals over K = 2,4,6,8 against the quintic-log trend
        std::vector<std::pair<int, std::size_t>> counts;
        for (int k : {2, 4, 6, 8})
            counts.emplace_back(k, walk_unitary(build_monomials({1.0, 10.0, k})).u_h.size());
        const double c = 4.0 * static_cast<double>(counts.front().second) / (32.0 * std::log2(3.0));
        for (const auto& [k, total] : counts)
            require(static_cast<double>(total) <= c * std::pow(k, 5) * std::log2(k + 1.0),
                    "gate total at K=" + std::to_string(k) + " breaks the trend bound");
    });

    const double total = seconds_since(suite_start);
    std::printf("%d/9 criteria passed in %.1f s\n", 9 - g_failures, total);
    if (total > 600.0) {
        std::printf("[FAIL] total runtime exceeds 10 minutes\n");
        ++g_failures;
    }
    return g_failures;
}
