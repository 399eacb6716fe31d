#pragma once

// The DLCQ (phi^4)_2 light-front Hamiltonian as a list of squeezed-operator
// monomials, plus the classical dense-matrix oracle, exact spectra, and the
// critical-coupling bisection.
//
// H = H_{1->1} + H_{2->2} + H_{3->1} + H_{1->3} with momentum-conserving
// terms only; the logarithmically divergent self-energy is removed by normal
// ordering, leaving the m^2/k one-body coefficient.

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bosonwalk/fock.hpp"
#include "bosonwalk/linalg.hpp"

#include <Eigen/Dense>

namespace bosonwalk {

struct ModelParams {
    double m2 = 1.0;              // mass-squared parameter, MeV^2
    double lambda_over_m2 = 0.0;  // dimensionless coupling
    int total_momentum = 1;       // K

    void validate() const {
        if (!(m2 > 0.0)) throw std::invalid_argument("ModelParams: m2 must be positive");
        if (!(lambda_over_m2 >= 0.0)) throw std::invalid_argument("ModelParams: lambda/m2 must be non-negative");
        if (total_momentum < 1) throw std::invalid_argument("ModelParams: K must be >= 1");
    }
};

/// The eight per-mode combinations of squeezed boson operators.
enum class WKind {
    Plus,                // b+
    PlusPlus,            // b+ b+
    PlusPlusPlus,        // b+ b+ b+
    Minus,               // b
    MinusMinus,          // b b
    MinusMinusMinus,     // b b b
    PlusMinus,           // b+ b
    PlusPlusMinusMinus,  // b+ b+ b b
};

inline int occupation_change(WKind kind) {
    switch (kind) {
        case WKind::Plus: return +1;
        case WKind::PlusPlus: return +2;
        case WKind::PlusPlusPlus: return +3;
        case WKind::Minus: return -1;
        case WKind::MinusMinus: return -2;
        case WKind::MinusMinusMinus: return -3;
        case WKind::PlusMinus: return 0;
        case WKind::PlusPlusMinusMinus: return 0;
    }
    throw std::logic_error("occupation_change: bad WKind");
}

inline int creation_count(WKind kind) {
    switch (kind) {
        case WKind::Plus: return 1;
        case WKind::PlusPlus: return 2;
        case WKind::PlusPlusPlus: return 3;
        case WKind::Minus: case WKind::MinusMinus: case WKind::MinusMinusMinus: return 0;
        case WKind::PlusMinus: return 1;
        case WKind::PlusPlusMinusMinus: return 2;
    }
    throw std::logic_error("creation_count: bad WKind");
}

inline int annihilation_count(WKind kind) {
    switch (kind) {
        case WKind::Plus: case WKind::PlusPlus: case WKind::PlusPlusPlus: return 0;
        case WKind::Minus: return 1;
        case WKind::MinusMinus: return 2;
        case WKind::MinusMinusMinus: return 3;
        case WKind::PlusMinus: return 1;
        case WKind::PlusPlusMinusMinus: return 2;
    }
    throw std::logic_error("annihilation_count: bad WKind");
}

inline int operator_count(WKind kind) { return creation_count(kind) + annihilation_count(kind); }

inline const char* symbol(WKind kind) {
    switch (kind) {
        case WKind::Plus: return "(+)";
        case WKind::PlusPlus: return "(++)";
        case WKind::PlusPlusPlus: return "(+++)";
        case WKind::Minus: return "(-)";
        case WKind::MinusMinus: return "(--)";
        case WKind::MinusMinusMinus: return "(---)";
        case WKind::PlusMinus: return "(+-)";
        case WKind::PlusPlusMinusMinus: return "(++--)";
    }
    throw std::logic_error("symbol: bad WKind");
}

/// Occupation range [r_i, r_f] on which the combination acts without
/// vanishing; empty (first > second) when Lambda is too small.
inline std::pair<int, int> valid_range(WKind kind, int cap) {
    switch (kind) {
        case WKind::Plus: return {0, cap - 1};
        case WKind::PlusPlus: return {0, cap - 2};
        case WKind::PlusPlusPlus: return {0, cap - 3};
        case WKind::Minus: return {1, cap};
        case WKind::MinusMinus: return {2, cap};
        case WKind::MinusMinusMinus: return {3, cap};
        case WKind::PlusMinus: return {1, cap};
        case WKind::PlusPlusMinusMinus: return {2, cap};
    }
    throw std::logic_error("valid_range: bad WKind");
}

/// Scaled normalization factor xi_r in (0, 1], defined on the valid range.
inline double xi_factor(WKind kind, int r, int cap) {
    const double c = cap;
    switch (kind) {
        case WKind::Plus: return std::sqrt((r + 1) / c);
        case WKind::PlusPlus: return std::sqrt((r + 1) * (r + 2) / (c * c));
        case WKind::PlusPlusPlus: return std::sqrt((r + 1.0) * (r + 2) * (r + 3) / (c * c * c));
        case WKind::Minus: return std::sqrt(r / c);
        case WKind::MinusMinus: return std::sqrt(r * (r - 1) / (c * c));
        case WKind::MinusMinusMinus: return std::sqrt(r * (r - 1.0) * (r - 2) / (c * c * c));
        case WKind::PlusMinus: return r / c;
        case WKind::PlusPlusMinusMinus: return r * (r - 1) / (c * c);
    }
    throw std::logic_error("xi_factor: bad WKind");
}

/// Matrix element of the unsqueezed combination on |r>: products of
/// sqrt(r+1)/sqrt(r) ladder factors. Zero exactly on annihilation underflow.
inline double unsqueezed_amp(WKind kind, int r) {
    switch (kind) {
        case WKind::Plus: return std::sqrt(r + 1.0);
        case WKind::PlusPlus: return std::sqrt((r + 1.0) * (r + 2.0));
        case WKind::PlusPlusPlus: return std::sqrt((r + 1.0) * (r + 2.0) * (r + 3.0));
        case WKind::Minus: return r < 1 ? 0.0 : std::sqrt(static_cast<double>(r));
        case WKind::MinusMinus: return r < 2 ? 0.0 : std::sqrt(r * (r - 1.0));
        case WKind::MinusMinusMinus: return r < 3 ? 0.0 : std::sqrt(r * (r - 1.0) * (r - 2.0));
        case WKind::PlusMinus: return static_cast<double>(r);
        case WKind::PlusPlusMinusMinus: return r * (r - 1.0);
    }
    throw std::logic_error("unsqueezed_amp: bad WKind");
}

enum class MonomialOrigin { H11, H22, H31, H13 };

inline const char* to_string(MonomialOrigin origin) {
    switch (origin) {
        case MonomialOrigin::H11: return "H11";
        case MonomialOrigin::H22: return "H22";
        case MonomialOrigin::H31: return "H31";
        case MonomialOrigin::H13: return "H13";
    }
    throw std::logic_error("to_string: bad MonomialOrigin");
}

/// One term of the squeezed Hamiltonian: coefficient B'_j times per-mode
/// combinations, factors sorted by ascending mode.
struct Monomial {
    int index = 0;
    std::vector<std::pair<int, WKind>> factors;  // (mode, combination)
    double coefficient = 0.0;                    // B'_j, MeV^2
    MonomialOrigin origin = MonomialOrigin::H11;

    std::string to_string() const {
        std::string out;
        for (const auto& [mode, kind] : factors) {
            out += symbol(kind);
            out += "_" + std::to_string(mode);
        }
        return out;
    }
};

struct HamiltonianSpec {
    ModelParams params;
    std::vector<Monomial> monomials;
    int monomial_count = 0;    // M
    int index_dimension = 0;   // D = 2^ceil(log2 M)
    double subnormalization = 0.0;  // Xi = max_j B'_j, MeV^2

    double block_encoding_scale() const { return index_dimension * subnormalization; }
};

/// Maps per-mode creation/annihilation multisets to Table-style combinations.
/// Every momentum-conserving phi^4 monomial lands on one of the eight kinds;
/// anything else is a structural error.
inline std::vector<std::pair<int, WKind>> group_operators(const std::vector<int>& creation_modes,
                                                          const std::vector<int>& annihilation_modes) {
    std::map<int, std::pair<int, int>> counts;  // mode -> (creations, annihilations)
    for (int m : creation_modes) {
        if (m < 1) throw std::invalid_argument("group_operators: bad mode");
        counts[m].first++;
    }
    for (int m : annihilation_modes) {
        if (m < 1) throw std::invalid_argument("group_operators: bad mode");
        counts[m].second++;
    }
    std::vector<std::pair<int, WKind>> factors;
    for (const auto& [mode, ca] : counts) {
        const auto [c, a] = ca;
        WKind kind;
        if (c == 1 && a == 0) kind = WKind::Plus;
        else if (c == 2 && a == 0) kind = WKind::PlusPlus;
        else if (c == 3 && a == 0) kind = WKind::PlusPlusPlus;
        else if (c == 0 && a == 1) kind = WKind::Minus;
        else if (c == 0 && a == 2) kind = WKind::MinusMinus;
        else if (c == 0 && a == 3) kind = WKind::MinusMinusMinus;
        else if (c == 1 && a == 1) kind = WKind::PlusMinus;
        else if (c == 2 && a == 2) kind = WKind::PlusPlusMinusMinus;
        else
            throw std::invalid_argument("group_operators: no combination matches mode " + std::to_string(mode) +
                                        " with " + std::to_string(c) + " creations, " + std::to_string(a) +
                                        " annihilations");
        factors.emplace_back(mode, kind);
    }
    return factors;
}

namespace detail {

inline double pair_norm_sq(int k, int l) { return k == l ? 2.0 : 1.0; }

inline double triple_norm_sq(int l, int m, int n) {
    if (l == m && m == n) return 6.0;
    if (l == m || m == n || l == n) return 2.0;
    return 1.0;
}

}  // namespace detail

/// Enumerates the squeezed-operator monomial list with coefficients B'_j.
/// Deterministic j assignment: H11 terms by mode, then H22 by total momentum
/// transfer and pair order, then H31, then the adjoint H13 block.
inline HamiltonianSpec build_monomials(const ModelParams& params) {
    params.validate();
    const int K = params.total_momentum;
    const double g = params.m2 * params.lambda_over_m2 / (4.0 * std::numbers::pi);
    const auto caps = max_occupations(K);
    const auto cap = [&](int k) { return static_cast<double>(caps[static_cast<std::size_t>(k - 1)]); };

    HamiltonianSpec spec;
    spec.params = params;
    auto push = [&](std::vector<int> cre, std::vector<int> ann, double coeff, MonomialOrigin origin) {
        Monomial m;
        m.index = static_cast<int>(spec.monomials.size());
        m.factors = group_operators(cre, ann);
        m.coefficient = coeff;
        m.origin = origin;
        spec.monomials.push_back(std::move(m));
    };

    // One-body: normal ordering drops the divergent self-energy, leaving
    // m^2/k, squeezed to m^2 * Lambda_k / k.
    for (int k = 1; k <= K; ++k) push({k}, {k}, params.m2 * cap(k) / k, MonomialOrigin::H11);

    // Two-to-two: k<=l, m<=n with k+l = m+n <= K (larger transfers act as
    // zero on every fixed-K state).
    for (int s = 2; s <= K; ++s) {
        std::vector<std::pair<int, int>> pairs;
        for (int a = 1; a <= s / 2; ++a) pairs.emplace_back(a, s - a);
        for (const auto& [k, l] : pairs) {
            for (const auto& [m, n] : pairs) {
                const double b = g / (detail::pair_norm_sq(k, l) * detail::pair_norm_sq(m, n)) /
                                 std::sqrt(static_cast<double>(k) * l * m * n);
                const double bp = b * std::sqrt(cap(k) * cap(l) * cap(m) * cap(n));
                push({k, l}, {m, n}, bp, MonomialOrigin::H22);
            }
        }
    }

    // Three-to-one and its adjoint: l<=m<=n with k = l+m+n <= K.
    std::vector<std::array<int, 3>> triples;
    for (int l = 1; l <= K; ++l)
        for (int m = l; m <= K; ++m)
            for (int n = m; n <= K; ++n)
                if (l + m + n <= K) triples.push_back({l, m, n});
    for (const auto& [l, m, n] : triples) {
        const int k = l + m + n;
        const double b = g / detail::triple_norm_sq(l, m, n) / std::sqrt(static_cast<double>(k) * l * m * n);
        const double bp = b * std::sqrt(cap(k) * cap(l) * cap(m) * cap(n));
        push({k}, {l, m, n}, bp, MonomialOrigin::H31);
    }
    for (const auto& [l, m, n] : triples) {
        const int k = l + m + n;
        const double b = g / detail::triple_norm_sq(l, m, n) / std::sqrt(static_cast<double>(k) * l * m * n);
        const double bp = b * std::sqrt(cap(k) * cap(l) * cap(m) * cap(n));
        push({l, m, n}, {k}, bp, MonomialOrigin::H13);
    }

    spec.monomial_count = static_cast<int>(spec.monomials.size());
    const auto layout = build_layout(K, spec.monomial_count);
    spec.index_dimension = layout.index_dimension;
    spec.subnormalization = 0.0;
    for (const auto& m : spec.monomials) spec.subnormalization = std::max(spec.subnormalization, m.coefficient);
    return spec;
}

/// Classical oracle: assembles <G|H|F> by applying unsqueezed ladder factors
/// monomial by monomial. Symmetric; block diagonal in parity.
inline Eigen::MatrixXd exact_matrix(const HamiltonianSpec& spec, const std::vector<FockState>& basis) {
    const int K = spec.params.total_momentum;
    const auto caps = max_occupations(K);
    std::map<std::map<int, int>, int> index_of;
    for (std::size_t i = 0; i < basis.size(); ++i) index_of[basis[i].occupations()] = static_cast<int>(i);

    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(basis.size()),
                                              static_cast<Eigen::Index>(basis.size()));
    for (const auto& mono : spec.monomials) {
        // Undo the squeezing: B_j = B'_j / sqrt(prod_k Lambda_k^{ops on k}).
        double cap_product = 1.0;
        for (const auto& [mode, kind] : mono.factors)
            for (int i = 0; i < operator_count(kind); ++i)
                cap_product *= caps[static_cast<std::size_t>(mode - 1)];
        const double b = mono.coefficient / std::sqrt(cap_product);

        for (std::size_t col = 0; col < basis.size(); ++col) {
            double amp = b;
            std::map<int, int> occ = basis[col].occupations();
            for (const auto& [mode, kind] : mono.factors) {
                const int r = occ.count(mode) ? occ[mode] : 0;
                const double f = unsqueezed_amp(kind, r);
                if (f == 0.0) {
                    amp = 0.0;
                    break;
                }
                amp *= f;
                const int rr = r + occupation_change(kind);
                if (rr > 0) occ[mode] = rr;
                else occ.erase(mode);
            }
            if (amp == 0.0) continue;
            const auto row = index_of.find(occ);
            if (row == index_of.end()) throw std::logic_error("exact_matrix: monomial left the fixed-K basis");
            h(row->second, static_cast<Eigen::Index>(col)) += amp;
        }
    }
    return h;
}

/// Ascending eigenvalues of a symmetric matrix, MeV^2.
inline Eigen::VectorXd exact_spectrum(const Eigen::MatrixXd& matrix) { return symmetric_eig(matrix).values; }

/// Eigenvalues of the invariant-mass operator M^2 = K H.
inline Eigen::VectorXd mass_squared_spectrum(const HamiltonianSpec& spec, const std::vector<FockState>& basis) {
    return spec.params.total_momentum * exact_spectrum(exact_matrix(spec, basis));
}

inline std::vector<int> sector_indices(const std::vector<FockState>& basis, Parity sector) {
    std::vector<int> out;
    for (std::size_t i = 0; i < basis.size(); ++i)
        if (sector_of(basis[i]) == sector) out.push_back(static_cast<int>(i));
    return out;
}

inline Eigen::MatrixXd submatrix(const Eigen::MatrixXd& matrix, const std::vector<int>& indices) {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(indices.size()), static_cast<Eigen::Index>(indices.size()));
    for (std::size_t i = 0; i < indices.size(); ++i)
        for (std::size_t j = 0; j < indices.size(); ++j)
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = matrix(indices[i], indices[j]);
    return out;
}

inline double lowest_sector_eigenvalue(int total_momentum, Parity sector, double lambda_over_m2, double m2 = 1.0) {
    ModelParams params{m2, lambda_over_m2, total_momentum};
    const auto basis = enumerate_basis(total_momentum);
    const auto spec = build_monomials(params);
    const auto h = exact_matrix(spec, basis);
    const auto ids = sector_indices(basis, sector);
    if (ids.empty()) throw std::invalid_argument("lowest_sector_eigenvalue: empty sector");
    return exact_spectrum(submatrix(h, ids))(0);
}

/// Bisection on the sign of the lowest sector eigenvalue. The coupling where
/// it crosses zero is the critical coupling (vanishing mass gap).
inline double find_critical_coupling(int total_momentum, Parity sector, double lambda_lo, double lambda_hi,
                                     double tol, double m2 = 1.0) {
    if (!(tol > 0.0)) throw std::invalid_argument("find_critical_coupling: tol must be positive");
    if (!(lambda_lo < lambda_hi)) throw std::invalid_argument("find_critical_coupling: empty bracket");
    double f_lo = lowest_sector_eigenvalue(total_momentum, sector, lambda_lo, m2);
    double f_hi = lowest_sector_eigenvalue(total_momentum, sector, lambda_hi, m2);
    if ((f_lo > 0.0) == (f_hi > 0.0))
        throw std::runtime_error("find_critical_coupling: lowest eigenvalue does not change sign over the bracket");
    double lo = lambda_lo, hi = lambda_hi;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = lowest_sector_eigenvalue(total_momentum, sector, mid, m2);
        if ((f_mid > 0.0) == (f_lo > 0.0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace bosonwalk
