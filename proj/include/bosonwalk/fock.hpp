#pragma once

// Fixed-K many-boson Fock bases, parity sectors, and the qubit register
// layout that encodes per-mode occupations as binaries.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace bosonwalk {

enum class Parity { Even, Odd };

inline const char* to_string(Parity p) { return p == Parity::Even ? "even" : "odd"; }

/// Maximal occupation of mode k at total longitudinal momentum K.
inline std::vector<int> max_occupations(int total_momentum) {
    if (total_momentum < 1) throw std::invalid_argument("max_occupations: K must be >= 1");
    std::vector<int> caps(static_cast<std::size_t>(total_momentum));
    for (int k = 1; k <= total_momentum; ++k) caps[static_cast<std::size_t>(k - 1)] = total_momentum / k;
    return caps;
}

/// Occupation-number state |k^{r_k}, l^{r_l}, ...> with sum_k k*r_k = K.
/// Modes with zero occupation are absent from the map.
class FockState {
  public:
    FockState(std::map<int, int> occupations, int total_momentum)
        : occupations_(std::move(occupations)), total_momentum_(total_momentum) {
        if (total_momentum_ < 1) throw std::invalid_argument("FockState: K must be >= 1");
        long long sum = 0;
        for (const auto& [mode, count] : occupations_) {
            if (mode < 1) throw std::invalid_argument("FockState: mode indices start at 1");
            if (count < 1) throw std::invalid_argument("FockState: stored occupations must be >= 1");
            sum += static_cast<long long>(mode) * count;
        }
        if (sum != total_momentum_)
            throw std::invalid_argument("FockState: sum_k k*r_k = " + std::to_string(sum) +
                                        " does not match K = " + std::to_string(total_momentum_));
    }

    int total_momentum() const { return total_momentum_; }
    const std::map<int, int>& occupations() const { return occupations_; }

    int occupation(int mode) const {
        auto it = occupations_.find(mode);
        return it == occupations_.end() ? 0 : it->second;
    }

    int particle_count() const {
        int n = 0;
        for (const auto& [mode, count] : occupations_) n += count;
        return n;
    }

    /// Caret-exponent form with modes in descending order, e.g. "2^1 1^2".
    std::string to_string() const {
        std::ostringstream os;
        bool first = true;
        for (auto it = occupations_.rbegin(); it != occupations_.rend(); ++it) {
            if (!first) os << ' ';
            os << it->first << '^' << it->second;
            first = false;
        }
        return os.str();
    }

    friend bool operator==(const FockState& a, const FockState& b) {
        return a.total_momentum_ == b.total_momentum_ && a.occupations_ == b.occupations_;
    }
    friend bool operator<(const FockState& a, const FockState& b) {
        if (a.total_momentum_ != b.total_momentum_) return a.total_momentum_ < b.total_momentum_;
        return a.occupations_ < b.occupations_;
    }

  private:
    std::map<int, int> occupations_;
    int total_momentum_;
};

inline Parity sector_of(const FockState& state) {
    return state.particle_count() % 2 == 0 ? Parity::Even : Parity::Odd;
}

/// All Fock states with total momentum K, ordered by descending-lexicographic
/// integer partitions: K=4 gives {4^1}, {3^1 1^1}, {2^2}, {2^1 1^2}, {1^4}.
inline std::vector<FockState> enumerate_basis(int total_momentum) {
    if (total_momentum < 1) throw std::invalid_argument("enumerate_basis: K must be >= 1");
    std::vector<FockState> basis;
    std::vector<int> parts;
    auto emit = [&] {
        std::map<int, int> occ;
        for (int p : parts) ++occ[p];
        basis.emplace_back(std::move(occ), total_momentum);
    };
    // Iterative descending-lex partition generation.
    auto rec = [&](auto&& self, int remaining, int max_part) -> void {
        if (remaining == 0) {
            emit();
            return;
        }
        for (int p = std::min(remaining, max_part); p >= 1; --p) {
            parts.push_back(p);
            self(self, remaining - p, p);
            parts.pop_back();
        }
    };
    rec(rec, total_momentum, total_momentum);
    return basis;
}

/// Parses the caret-exponent syntax, e.g. "4^1" or "2^1 1^2" (comma or
/// space separated).
inline FockState parse_fock_state(const std::string& text, int total_momentum) {
    std::map<int, int> occ;
    std::string token;
    std::string normalized = text;
    for (char& c : normalized)
        if (c == ',') c = ' ';
    std::istringstream stream(normalized);
    while (stream >> token) {
        auto caret = token.find('^');
        if (caret == std::string::npos || caret == 0 || caret + 1 == token.size())
            throw std::invalid_argument("parse_fock_state: expected mode^occupation, got '" + token + "'");
        int mode = 0, count = 0;
        try {
            mode = std::stoi(token.substr(0, caret));
            count = std::stoi(token.substr(caret + 1));
        } catch (const std::exception&) {
            throw std::invalid_argument("parse_fock_state: bad token '" + token + "'");
        }
        if (occ.count(mode)) throw std::invalid_argument("parse_fock_state: repeated mode in '" + text + "'");
        occ[mode] = count;
    }
    if (occ.empty()) throw std::invalid_argument("parse_fock_state: empty state");
    return FockState(std::move(occ), total_momentum);
}

/// Qubit register layout for the walk circuits, a pure function of (K, M):
/// system subregisters s_1..s_K first (little-endian within each), then
/// ph_1..ph_K, then me, then ac, then the id register of width ceil(log2 M).
struct RegisterLayout {
    int total_momentum = 0;
    int monomial_count = 0;
    int index_dimension = 0;            // D = 2^ceil(log2 M)
    std::vector<int> system_offset;     // per mode k (index k-1)
    std::vector<int> system_width;      // ceil(log2(Lambda_k + 1))
    int system_qubits = 0;              // Q_s
    int ph_offset = 0;
    int me_qubit = 0;
    int ac_qubit = 0;
    int id_offset = 0;
    int id_width = 0;
    int total_qubits = 0;

    std::vector<int> system_qubit_list(int mode) const {
        std::vector<int> q(static_cast<std::size_t>(system_width[static_cast<std::size_t>(mode - 1)]));
        for (std::size_t i = 0; i < q.size(); ++i)
            q[i] = system_offset[static_cast<std::size_t>(mode - 1)] + static_cast<int>(i);
        return q;
    }
    int ph_qubit(int mode) const { return ph_offset + mode - 1; }
    std::vector<int> id_qubit_list() const {
        std::vector<int> q(static_cast<std::size_t>(id_width));
        for (std::size_t i = 0; i < q.size(); ++i) q[i] = id_offset + static_cast<int>(i);
        return q;
    }
    /// Projection set for the walk: everything except the system register.
    std::vector<int> ancilla_qubit_list() const {
        std::vector<int> q;
        for (int i = system_qubits; i < total_qubits; ++i) q.push_back(i);
        return q;
    }
};

inline RegisterLayout build_layout(int total_momentum, int monomial_count) {
    if (total_momentum < 1) throw std::invalid_argument("build_layout: K must be >= 1");
    if (monomial_count < 1) throw std::invalid_argument("build_layout: M must be >= 1");
    RegisterLayout layout;
    layout.total_momentum = total_momentum;
    layout.monomial_count = monomial_count;
    const auto caps = max_occupations(total_momentum);
    int cursor = 0;
    for (int k = 1; k <= total_momentum; ++k) {
        const int width = std::bit_width(static_cast<unsigned>(caps[static_cast<std::size_t>(k - 1)]));
        layout.system_offset.push_back(cursor);
        layout.system_width.push_back(width);
        cursor += width;
    }
    layout.system_qubits = cursor;
    layout.ph_offset = cursor;
    cursor += total_momentum;
    layout.me_qubit = cursor++;
    layout.ac_qubit = cursor++;
    layout.id_offset = cursor;
    layout.id_width = monomial_count == 1 ? 0 : std::bit_width(static_cast<unsigned>(monomial_count - 1));
    cursor += layout.id_width;
    layout.index_dimension = 1 << layout.id_width;
    layout.total_qubits = cursor;
    return layout;
}

/// Computational-basis index with each r_k placed in subregister s_k and all
/// ancilla bits zero. Bijective over valid states.
inline std::uint64_t state_index(const FockState& state, const RegisterLayout& layout) {
    if (state.total_momentum() != layout.total_momentum)
        throw std::invalid_argument("state_index: state K does not match layout");
    std::uint64_t index = 0;
    for (const auto& [mode, count] : state.occupations()) {
        const int width = layout.system_width[static_cast<std::size_t>(mode - 1)];
        if (count >= (1 << width)) throw std::invalid_argument("state_index: occupation exceeds subregister capacity");
        index |= static_cast<std::uint64_t>(count) << layout.system_offset[static_cast<std::size_t>(mode - 1)];
    }
    return index;
}

/// Inverse of state_index on the system register bits.
inline FockState state_from_index(std::uint64_t index, const RegisterLayout& layout) {
    std::map<int, int> occ;
    for (int k = 1; k <= layout.total_momentum; ++k) {
        const int width = layout.system_width[static_cast<std::size_t>(k - 1)];
        const auto r = static_cast<int>((index >> layout.system_offset[static_cast<std::size_t>(k - 1)]) &
                                        ((1ull << width) - 1));
        if (r > 0) occ[k] = r;
    }
    return FockState(std::move(occ), layout.total_momentum);
}

}  // namespace bosonwalk
