#pragma once

// Gate-level IR: elementary gates with arbitrary control conditions,
// ripple increment/decrement, composition, inversion, and the reflection
// about |0...0>. Multi-controlled gates are first-class; no decomposition
// pass is performed.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace bosonwalk {

enum class GateKind { PauliX, Hadamard, RotY, Phase };

/// Control condition: gate fires only where `qubit` is in state `value`.
struct Control {
    int qubit = 0;
    int value = 1;
    friend bool operator==(const Control&, const Control&) = default;
};

/// One elementary gate. Phase follows the convention P(beta)|0> = e^{i beta}|0>,
/// P(beta)|1> = |1>: the phase multiplies the |0> component of the target.
struct Gate {
    GateKind kind = GateKind::PauliX;
    int target = 0;
    double angle = 0.0;  // RotY/Phase only
    std::vector<Control> controls;

    static Gate x(int target, std::vector<Control> controls = {}) {
        return Gate{GateKind::PauliX, target, 0.0, std::move(controls)};
    }
    static Gate h(int target, std::vector<Control> controls = {}) {
        return Gate{GateKind::Hadamard, target, 0.0, std::move(controls)};
    }
    static Gate ry(double theta, int target, std::vector<Control> controls = {}) {
        return Gate{GateKind::RotY, target, theta, std::move(controls)};
    }
    static Gate phase(double beta, int target, std::vector<Control> controls = {}) {
        return Gate{GateKind::Phase, target, beta, std::move(controls)};
    }

    friend bool operator==(const Gate&, const Gate&) = default;
};

class Circuit {
  public:
    Circuit() = default;
    explicit Circuit(int num_qubits) : num_qubits_(num_qubits) {
        if (num_qubits < 0) throw std::invalid_argument("Circuit: negative qubit count");
    }

    int num_qubits() const { return num_qubits_; }
    const std::vector<Gate>& gates() const { return gates_; }
    std::size_t size() const { return gates_.size(); }

    void add(Gate gate) {
        if (gate.target < 0 || gate.target >= num_qubits_)
            throw std::invalid_argument("Circuit::add: target out of range");
        std::set<int> seen;
        for (const auto& c : gate.controls) {
            if (c.qubit < 0 || c.qubit >= num_qubits_)
                throw std::invalid_argument("Circuit::add: control out of range");
            if (c.qubit == gate.target) throw std::invalid_argument("Circuit::add: control collides with target");
            if (!seen.insert(c.qubit).second) throw std::invalid_argument("Circuit::add: duplicate control qubit");
            if (c.value != 0 && c.value != 1) throw std::invalid_argument("Circuit::add: control value must be 0 or 1");
        }
        gates_.push_back(std::move(gate));
    }

    /// Appends another circuit's gates; the qubit count grows as needed.
    void append(const Circuit& other) {
        num_qubits_ = std::max(num_qubits_, other.num_qubits_);
        gates_.insert(gates_.end(), other.gates_.begin(), other.gates_.end());
    }

    std::set<int> used_qubits() const {
        std::set<int> used;
        for (const auto& g : gates_) {
            used.insert(g.target);
            for (const auto& c : g.controls) used.insert(c.qubit);
        }
        return used;
    }

    friend bool operator==(const Circuit&, const Circuit&) = default;

  private:
    int num_qubits_ = 0;
    std::vector<Gate> gates_;
};

/// Control pattern asserting that `reg` (little-endian) holds `value`.
inline std::vector<Control> controls_for_value(const std::vector<int>& reg, std::uint64_t value) {
    if (value >> reg.size() != 0)
        throw std::invalid_argument("controls_for_value: value does not fit in register");
    std::vector<Control> out;
    out.reserve(reg.size());
    for (std::size_t i = 0; i < reg.size(); ++i)
        out.push_back({reg[i], static_cast<int>((value >> i) & 1u)});
    return out;
}

namespace detail {
inline void check_register(const std::vector<int>& reg, const char* who) {
    if (reg.empty()) throw std::invalid_argument(std::string(who) + ": empty register");
    std::set<int> seen(reg.begin(), reg.end());
    if (seen.size() != reg.size()) throw std::invalid_argument(std::string(who) + ": duplicate qubits");
    if (*seen.begin() < 0) throw std::invalid_argument(std::string(who) + ": negative qubit index");
}
}  // namespace detail

/// |r> -> |r+1 mod 2^n> on a little-endian register: X on bit i controlled on
/// all lower bits being 1, cascading from the top, then X on bit 0. n gates.
inline Circuit increment(const std::vector<int>& reg) {
    detail::check_register(reg, "increment");
    Circuit c(*std::max_element(reg.begin(), reg.end()) + 1);
    for (std::size_t i = reg.size(); i-- > 1;) {
        std::vector<Control> lower;
        for (std::size_t j = 0; j < i; ++j) lower.push_back({reg[j], 1});
        c.add(Gate::x(reg[i], std::move(lower)));
    }
    c.add(Gate::x(reg[0]));
    return c;
}

/// |r> -> |r-1 mod 2^n>: the increment gates in reverse order (each is
/// self-inverse).
inline Circuit decrement(const std::vector<int>& reg) {
    detail::check_register(reg, "decrement");
    Circuit c(*std::max_element(reg.begin(), reg.end()) + 1);
    c.add(Gate::x(reg[0]));
    for (std::size_t i = 1; i < reg.size(); ++i) {
        std::vector<Control> lower;
        for (std::size_t j = 0; j < i; ++j) lower.push_back({reg[j], 1});
        c.add(Gate::x(reg[i], std::move(lower)));
    }
    return c;
}

/// Adds the given control conditions to every gate. The extra controls must
/// not touch any qubit the circuit already uses.
inline Circuit controlled(const Circuit& circuit, const std::vector<Control>& extra) {
    const auto used = circuit.used_qubits();
    std::set<int> extra_seen;
    int max_extra = -1;
    for (const auto& c : extra) {
        if (used.count(c.qubit)) throw std::invalid_argument("controlled: control overlaps circuit qubits");
        if (!extra_seen.insert(c.qubit).second) throw std::invalid_argument("controlled: duplicate extra control");
        max_extra = std::max(max_extra, c.qubit);
    }
    Circuit out(std::max(circuit.num_qubits(), max_extra + 1));
    for (Gate g : circuit.gates()) {
        g.controls.insert(g.controls.end(), extra.begin(), extra.end());
        out.add(std::move(g));
    }
    return out;
}

inline Circuit inverse(const Circuit& circuit) {
    Circuit out(circuit.num_qubits());
    for (auto it = circuit.gates().rbegin(); it != circuit.gates().rend(); ++it) {
        Gate g = *it;
        if (g.kind == GateKind::RotY || g.kind == GateKind::Phase) g.angle = -g.angle;
        out.add(std::move(g));
    }
    return out;
}

/// Pi = 2|0><0| - I on the given qubits: +1 on the all-zero state, -1
/// elsewhere. Realized as a zero-controlled Phase(pi) plus RotY(2 pi) on the
/// first qubit, which supplies the -1 bookkeeping phase as a physical gate
/// (so a controlled wrap of the reflection stays exact).
inline Circuit reflection_about_zero(const std::vector<int>& qubits) {
    detail::check_register(qubits, "reflection_about_zero");
    Circuit c(*std::max_element(qubits.begin(), qubits.end()) + 1);
    std::vector<Control> rest;
    for (std::size_t i = 1; i < qubits.size(); ++i) rest.push_back({qubits[i], 0});
    c.add(Gate::phase(std::numbers::pi, qubits[0], std::move(rest)));
    c.add(Gate::ry(2.0 * std::numbers::pi, qubits[0]));
    return c;
}

// --- text export -----------------------------------------------------------
// One gate per line, e.g.  RY(1.0471975511965976) t=5 c=[2:1,3:0]
// preceded by a "qubits N" header. Round-trip parseable.

inline std::string to_text(const Circuit& circuit) {
    std::ostringstream os;
    os.precision(17);
    os << "qubits " << circuit.num_qubits() << '\n';
    for (const auto& g : circuit.gates()) {
        switch (g.kind) {
            case GateKind::PauliX: os << "X"; break;
            case GateKind::Hadamard: os << "H"; break;
            case GateKind::RotY: os << "RY(" << g.angle << ")"; break;
            case GateKind::Phase: os << "P(" << g.angle << ")"; break;
        }
        os << " t=" << g.target << " c=[";
        for (std::size_t i = 0; i < g.controls.size(); ++i) {
            if (i) os << ',';
            os << g.controls[i].qubit << ':' << g.controls[i].value;
        }
        os << "]\n";
    }
    return os.str();
}

inline Circuit circuit_from_text(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line)) throw std::invalid_argument("circuit_from_text: empty input");
    std::istringstream header(line);
    std::string word;
    int nq = -1;
    header >> word >> nq;
    if (word != "qubits" || nq < 0) throw std::invalid_argument("circuit_from_text: missing 'qubits N' header");
    Circuit c(nq);
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string mnemonic;
        ls >> mnemonic;
        Gate g;
        if (mnemonic == "X") {
            g.kind = GateKind::PauliX;
        } else if (mnemonic == "H") {
            g.kind = GateKind::Hadamard;
        } else if (mnemonic.rfind("RY(", 0) == 0 || mnemonic.rfind("P(", 0) == 0) {
            g.kind = mnemonic[0] == 'R' ? GateKind::RotY : GateKind::Phase;
            const auto open = mnemonic.find('(');
            const auto close = mnemonic.rfind(')');
            if (close == std::string::npos || close <= open)
                throw std::invalid_argument("circuit_from_text: malformed angle in '" + line + "'");
            g.angle = std::stod(mnemonic.substr(open + 1, close - open - 1));
        } else {
            throw std::invalid_argument("circuit_from_text: unknown gate '" + mnemonic + "'");
        }
        std::string tfield, cfield;
        ls >> tfield >> cfield;
        if (tfield.rfind("t=", 0) != 0 || cfield.rfind("c=[", 0) != 0 || cfield.back() != ']')
            throw std::invalid_argument("circuit_from_text: malformed line '" + line + "'");
        g.target = std::stoi(tfield.substr(2));
        std::string body = cfield.substr(3, cfield.size() - 4);
        std::istringstream cs(body);
        std::string item;
        while (std::getline(cs, item, ',')) {
            const auto colon = item.find(':');
            if (colon == std::string::npos) throw std::invalid_argument("circuit_from_text: malformed control");
            g.controls.push_back({std::stoi(item.substr(0, colon)), std::stoi(item.substr(colon + 1))});
        }
        c.add(std::move(g));
    }
    return c;
}

}  // namespace bosonwalk
