#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "bosonwalk/circuit.hpp"
#include "bosonwalk/statevector.hpp"

using namespace bosonwalk;

namespace {

StateVector basis_state(int n, std::uint64_t index) {
    StateVector s;
    s.num_qubits = n;
    s.amplitudes.assign(1ull << n, 0.0);
    s.amplitudes[index] = 1.0;
    return s;
}

std::uint64_t measure_basis(const StateVector& s) {
    for (std::size_t i = 0; i < s.amplitudes.size(); ++i)
        if (std::abs(s.amplitudes[i]) > 0.5) return i;
    throw std::runtime_error("not a basis state");
}

StateVector random_state(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    StateVector s;
    s.num_qubits = n;
    s.amplitudes.resize(1ull << n);
    for (auto& a : s.amplitudes) a = {gauss(rng), gauss(rng)};
    const double norm = s.norm();
    for (auto& a : s.amplitudes) a /= norm;
    return s;
}

Circuit random_circuit(int n, int gates, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Circuit c(n);
    for (int i = 0; i < gates; ++i) {
        const int target = static_cast<int>(rng() % n);
        std::vector<Control> ctrl;
        for (int q = 0; q < n; ++q)
            if (q != target && rng() % 3 == 0) ctrl.push_back({q, static_cast<int>(rng() % 2)});
        const double angle = static_cast<double>(rng() % 1000) / 500.0 * 3.14159;
        switch (rng() % 4) {
            case 0: c.add(Gate::x(target, ctrl)); break;
            case 1: c.add(Gate::h(target, ctrl)); break;
            case 2: c.add(Gate::ry(angle, target, ctrl)); break;
            default: c.add(Gate::phase(angle, target, ctrl)); break;
        }
    }
    return c;
}

}  // namespace

TEST_CASE("increment maps r to r+1 mod 2^n") {
    const std::vector<int> reg{0, 1, 2};
    const auto inc = increment(reg);
    CHECK(inc.size() == 3);  // n gates
    for (std::uint64_t r = 0; r < 8; ++r) {
        auto s = basis_state(3, r);
        run(s, inc);
        CHECK(measure_basis(s) == ((r + 1) % 8));
    }
}

TEST_CASE("decrement inverts increment") {
    const std::vector<int> reg{0, 1, 2};
    const auto dec = decrement(reg);
    auto s = basis_state(3, 4);
    run(s, dec);
    CHECK(measure_basis(s) == 3);
    s = basis_state(3, 0);
    run(s, dec);
    CHECK(measure_basis(s) == 7);  // wraparound

    for (int n = 1; n <= 4; ++n) {
        std::vector<int> bits;
        for (int i = 0; i < n; ++i) bits.push_back(i);
        const auto round_trip = [&](std::uint64_t r) {
            auto state = basis_state(n, r);
            run(state, increment(bits));
            run(state, decrement(bits));
            return measure_basis(state);
        };
        for (std::uint64_t r = 0; r < (1ull << n); ++r) CHECK(round_trip(r) == r);
    }
    CHECK_THROWS_AS(increment({}), std::invalid_argument);
    CHECK_THROWS_AS(decrement({}), std::invalid_argument);
}

TEST_CASE("increment applied 2^n times is the identity") {
    const std::vector<int> reg{0, 1, 2};
    const auto inc = increment(reg);
    auto s = random_state(3, 99);
    const auto before = s.amplitudes;
    for (int i = 0; i < 8; ++i) run(s, inc);
    for (std::size_t i = 0; i < before.size(); ++i) CHECK(std::abs(s.amplitudes[i] - before[i]) < 1e-12);
}

TEST_CASE("controlled adds the binary pattern of j") {
    const auto inc = increment({0, 1, 2});
    const auto wrapped = controlled(inc, controls_for_value({4, 5, 6}, 5));
    REQUIRE(wrapped.size() == inc.size());
    for (const auto& g : wrapped.gates()) {
        const auto& c = g.controls;
        REQUIRE(c.size() >= 3);
        CHECK(c[c.size() - 3] == Control{4, 1});
        CHECK(c[c.size() - 2] == Control{5, 0});
        CHECK(c[c.size() - 1] == Control{6, 1});
    }
    CHECK(controlled(inc, {}) == inc);

    const auto doubly = controlled(controlled(inc, {{4, 1}}), {{5, 0}});
    for (const auto& g : doubly.gates()) {
        CHECK(g.controls[g.controls.size() - 2] == Control{4, 1});
        CHECK(g.controls.back() == Control{5, 0});
    }
    CHECK_THROWS_AS(controlled(inc, {{1, 1}}), std::invalid_argument);
}

TEST_CASE("inverse reverses and negates angles") {
    const auto c = random_circuit(4, 20, 11);
    CHECK(inverse(inverse(c)) == c);

    Circuit single(1);
    single.add(Gate::ry(0.7, 0));
    const auto inv = inverse(single);
    CHECK(inv.gates()[0].angle == -0.7);

    auto s = random_state(4, 12);
    const auto before = s.amplitudes;
    run(s, c);
    run(s, inverse(c));
    for (std::size_t i = 0; i < before.size(); ++i) CHECK(std::abs(s.amplitudes[i] - before[i]) < 1e-12);
}

TEST_CASE("reflection_about_zero") {
    const auto pi1 = circuit_unitary(reflection_about_zero({0}));
    CHECK(std::abs(pi1(0, 0) - 1.0) < 1e-14);
    CHECK(std::abs(pi1(1, 1) + 1.0) < 1e-14);
    CHECK(std::abs(pi1(0, 1)) < 1e-14);

    const auto pi2 = circuit_unitary(reflection_about_zero({0, 1}));
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            const double expected = i != j ? 0.0 : (i == 0 ? 1.0 : -1.0);
            CHECK(std::abs(pi2(i, j) - expected) < 1e-14);
        }

    const auto refl = reflection_about_zero({0, 1, 2});
    auto s = random_state(3, 5);
    const auto before = s.amplitudes;
    run(s, refl);
    run(s, refl);
    for (std::size_t i = 0; i < before.size(); ++i) CHECK(std::abs(s.amplitudes[i] - before[i]) < 1e-12);
}

TEST_CASE("emitted circuits are unitary on small registers") {
    const auto check_unitary = [](const Circuit& c) {
        const auto u = circuit_unitary(c);
        const auto delta = (u.adjoint() * u - Eigen::MatrixXcd::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
        CHECK(delta < 1e-12);
    };
    check_unitary(increment({0, 1, 2}));
    check_unitary(decrement({0, 1, 2, 3}));
    check_unitary(reflection_about_zero({0, 1, 2}));
    for (std::uint64_t seed = 0; seed < 8; ++seed) check_unitary(random_circuit(5, 25, seed));
}

TEST_CASE("text export round-trips") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const auto c = random_circuit(5, 15, 100 + seed);
        CHECK(circuit_from_text(to_text(c)) == c);
    }
    const auto line_format = to_text(Circuit(2));
    CHECK(line_format.rfind("qubits 2", 0) == 0);
    CHECK_THROWS_AS(circuit_from_text("no header"), std::invalid_argument);
}
