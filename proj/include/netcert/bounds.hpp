#pragma once

// Classical fidelity upper bounds: the largest fidelity a hybrid network with
// n_c classical nodes can show, maximized over which nodes are classical,
// their outcome tables, and the quantum state of the rest.
//
// Three routes:
//   brute    every subset and every outcome table, dense top eigenvalue of
//            the hybrid operator (independent oracle, small n only)
//   reduced  xy protocols only; one subset per size and the effective
//            parameters (per-node Z outcomes x per-setting products of the
//            XY outcomes), evaluated on the 2x2 blocks of the operator
//   closed   xy protocols only; exact maximization over the XY sign pattern
//
// For the xy protocols the hybrid operator only couples a basis string x of
// the quantum nodes with its complement. The Z terms collapse to
// 1/2 |0..0><0..0| (all classical Z outcomes +1) or 1/2 |1..1><1..1| (all -1),
// and the XY terms give <x'|F|x> = (1/2n) sum_j eps_j exp(i j pi d(x)/n) with
// eps_j = (-1)^j prod_{V_c} R_j and d(x) = #zeros(x) - #ones(x).

#include "netcert/errors.hpp"
#include "netcert/hybrid.hpp"
#include "netcert/parallel.hpp"
#include "netcert/protocol.hpp"
#include "netcert/qcore.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace netcert {

enum class BoundMethod { Brute, Reduced, Closed };

inline std::string to_string(BoundMethod m) {
    switch (m) {
        case BoundMethod::Brute: return "brute";
        case BoundMethod::Reduced: return "reduced";
        case BoundMethod::Closed: return "closed";
    }
    return "?";
}

inline BoundMethod parse_method(std::string_view name) {
    if (name == "brute") return BoundMethod::Brute;
    if (name == "reduced") return BoundMethod::Reduced;
    if (name == "closed") return BoundMethod::Closed;
    throw std::invalid_argument("unknown method '" + std::string(name) + "' (expected brute, reduced or closed)");
}

/// A hybrid strategy reaching the bound: classical tables plus the optimal
/// quantum state of the remaining nodes (ascending node order).
struct BoundWitness {
    std::vector<ClassicalAssignment> classical;
    Vector eigenvector;
};

struct BoundResult {
    int n = 0;
    std::optional<int> n_c;
    double bound = 0.0;
    BoundMethod method = BoundMethod::Brute;
    ProtocolKind protocol = ProtocolKind::GhzXY;
    std::optional<BoundWitness> witness;
};

/// Work limit for the brute-force search, in rough floating-point operations.
inline constexpr double kBruteCostLimit = 4e9;
/// Largest reduced search space, 2^(n + n_c).
inline constexpr int kReducedMaxBits = 26;

namespace detail {

inline std::vector<std::vector<int>> combinations(int n, int k) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur(k);
    for (int i = 0; i < k; ++i) cur[i] = i + 1;
    while (true) {
        out.push_back(cur);
        int i = k - 1;
        while (i >= 0 && cur[i] == n - k + i + 1) --i;
        if (i < 0) break;
        ++cur[i];
        for (int j = i + 1; j < k; ++j) cur[j] = cur[j - 1] + 1;
    }
    return out;
}

// bit (i*L + m-1) of `bits` set means node i of the subset answers setting m with -1
inline std::vector<ClassicalAssignment> decode_tables(const std::vector<int>& nodes, int L, std::uint64_t bits) {
    std::vector<ClassicalAssignment> out;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        ClassicalAssignment a{nodes[i], std::vector<int>(L)};
        for (int m = 0; m < L; ++m) a.outcomes[m] = ((bits >> (i * L + m)) & 1U) ? -1 : 1;
        out.push_back(std::move(a));
    }
    return out;
}

inline Vector top_eigenvector(const Matrix& m) {
    auto es = hermitian_eigs(m);
    return es.vectors.col(es.values.size() - 1);
}

inline void check_sizes(int n, int n_c) {
    if (n < 2) throw std::invalid_argument("bound: n must be at least 2");
    if (n_c < 1 || n_c > n - 1) throw std::invalid_argument("bound: n_c must lie in [1, n-1]");
}

inline BoundResult brute(const Decomposition& d, int n_c) {
    const int n = d.num_qubits();
    const int L = d.outcomes_per_node();
    const auto subsets = combinations(n, n_c);
    const int nq = n - n_c;
    const double dim = std::ldexp(1.0, nq);
    const double tables = std::ldexp(1.0, L * n_c);
    const double cost = static_cast<double>(subsets.size()) * tables * (std::pow(L + 1.0, n_c) * dim * dim + 10 * dim * dim * dim);
    if (L * n_c > 40 || cost > kBruteCostLimit) {
        char buf[200];
        std::snprintf(buf, sizeof buf, "brute-force search for n=%d, n_c=%d needs ~%.2g operations (limit %.2g); use the reduced method",
                      n, n_c, cost, kBruteCostLimit);
        throw ResourceLimitError(buf);
    }

    // Per subset: terms grouped by the setting indices they place on the
    // classical nodes; every group shares one classical sign.
    struct Group {
        std::vector<int> classical_setting;
        Matrix op;
    };
    std::vector<std::vector<Group>> groups(subsets.size());
    for (std::size_t si = 0; si < subsets.size(); ++si) {
        const auto& cn = subsets[si];
        std::vector<int> qn;
        for (int k = 1; k <= n; ++k) {
            if (!std::binary_search(cn.begin(), cn.end(), k)) qn.push_back(k);
        }
        std::map<std::vector<int>, Matrix> by_key;
        for (const auto& t : d.terms()) {
            std::vector<int> key;
            for (int k : cn) key.push_back(t.setting[k - 1]);
            auto [it, fresh] = by_key.try_emplace(key, Matrix::Zero(static_cast<Eigen::Index>(dim),
                                                                     static_cast<Eigen::Index>(dim)));
            d.operator_on(t.setting, qn).accumulate(it->second, t.coeff);
        }
        for (auto& [key, op] : by_key) groups[si].push_back({key, std::move(op)});
    }

    const std::uint64_t per_subset = std::uint64_t{1} << (L * n_c);
    const auto best = parallel_argmax(subsets.size() * per_subset, [&](std::uint64_t idx) {
        const auto& gs = groups[idx / per_subset];
        const std::uint64_t bits = idx % per_subset;
        Matrix f = Matrix::Zero(gs.front().op.rows(), gs.front().op.cols());
        for (const auto& g : gs) {
            int sign = 1;
            for (std::size_t i = 0; i < g.classical_setting.size(); ++i) {
                const int m = g.classical_setting[i];
                if (m != 0 && ((bits >> (i * L + m - 1)) & 1U)) sign = -sign;
            }
            f += static_cast<double>(sign) * g.op;
        }
        return max_eigenvalue(f);
    });

    BoundWitness w;
    w.classical = decode_tables(subsets[best.index / per_subset], L, best.index % per_subset);
    w.eigenvector = top_eigenvector(hybrid_operator(d, w.classical));
    return {n, n_c, best.value, BoundMethod::Brute, d.kind(), std::move(w)};
}

// Couplings <x'|F|x> indexed by t = number of ones in x (d(x) = nq - 2t).
inline std::vector<Complex> pair_couplings(int n, int nq, std::uint64_t sign_mask) {
    std::vector<Complex> b(static_cast<std::size_t>(nq + 1), 0.0);
    for (int t = 0; t <= nq; ++t) {
        const int dx = nq - 2 * t;
        Complex acc = 0.0;
        for (int j = 1; j <= n; ++j) {
            int eps = (j % 2) ? -1 : 1;
            if ((sign_mask >> (j - 1)) & 1U) eps = -eps;
            acc += static_cast<double>(eps) * std::polar(1.0, j * dx * std::numbers::pi / n);
        }
        b[t] = acc / (2.0 * n);
    }
    return b;
}

// Top eigenvalue for fixed couplings; z_all is +1, -1, or 0 when the classical Z outcomes disagree.
inline double block_top(const std::vector<Complex>& b, int z_all) {
    const double a = z_all == 1 ? 0.5 : 0.0;
    const double c = z_all == -1 ? 0.5 : 0.0;
    double best = 0.5 * (a + c) + std::sqrt(0.25 * (a - c) * (a - c) + std::norm(b[0]));
    for (std::size_t t = 1; t + 1 < b.size(); ++t) best = std::max(best, std::abs(b[t]));
    return best;
}

// Top eigenvector for the block achieving block_top, on nq qubits in GHZ-protocol observables.
inline Vector block_eigenvector(const std::vector<Complex>& b, int z_all, int nq) {
    const double a = z_all == 1 ? 0.5 : 0.0;
    const double c = z_all == -1 ? 0.5 : 0.0;
    const double lam_main = 0.5 * (a + c) + std::sqrt(0.25 * (a - c) * (a - c) + std::norm(b[0]));
    const auto d = static_cast<Eigen::Index>(dim_of(nq));
    Vector v = Vector::Zero(d);
    std::size_t t_best = 0;
    double best = lam_main;
    for (std::size_t t = 1; t + 1 < b.size(); ++t) {
        if (std::abs(b[t]) > best) {
            best = std::abs(b[t]);
            t_best = t;
        }
    }
    if (t_best == 0) {
        Matrix m(2, 2);
        m << a, std::conj(b[0]), b[0], c;
        const Vector e = top_eigenvector(m);
        v(0) = e(0);
        v(d - 1) = e(1);
    } else {
        // x = 0...0 1...1 with t_best ones, paired with its complement
        const std::uint64_t x = (std::uint64_t{1} << t_best) - 1;
        const std::uint64_t xc = (static_cast<std::uint64_t>(d) - 1) ^ x;
        v(static_cast<Eigen::Index>(x)) = 1.0 / std::sqrt(2.0);
        v(static_cast<Eigen::Index>(xc)) = std::polar(1.0 / std::sqrt(2.0), std::arg(b[t_best]));
    }
    return v;
}

// Maps a GHZ-protocol eigenvector to the star protocol (Hadamard on quantum leaves).
inline Vector to_star_frame(Vector v, const std::vector<int>& quantum_nodes) {
    const int nq = static_cast<int>(quantum_nodes.size());
    for (int i = 0; i < nq; ++i) {
        if (quantum_nodes[i] != 1) v = apply_local(v, pauli::H(), i + 1, nq);
    }
    return v;
}

inline BoundResult reduced(int n, int n_c, ProtocolKind kind) {
    if (!is_xy_protocol(kind)) {
        throw std::invalid_argument("the reduced search is defined for the ghz-xy and star-xy protocols");
    }
    if (n + n_c > kReducedMaxBits) {
        throw ResourceLimitError("reduced search space 2^" + std::to_string(n + n_c) + " exceeds 2^" +
                                 std::to_string(kReducedMaxBits));
    }
    const int nq = n - n_c;
    const std::uint64_t z_count = std::uint64_t{1} << n_c;
    const std::uint64_t z_all_minus = z_count - 1;
    const std::uint64_t s_count = std::uint64_t{1} << n;

    // Couplings depend only on the XY sign pattern; the Z outcomes only enter
    // through whether they all agree. Enumerate the full space anyway so the
    // argmax (and its tie-break) is over explicit strategies.
    std::vector<std::vector<Complex>> couplings(s_count);
    for (std::uint64_t s = 0; s < s_count; ++s) couplings[s] = pair_couplings(n, nq, s);
    const auto best = parallel_argmax(s_count * z_count, [&](std::uint64_t idx) {
        const std::uint64_t s = idx / z_count, z = idx % z_count;
        const int z_all = z == 0 ? 1 : (z == z_all_minus ? -1 : 0);
        return block_top(couplings[s], z_all);
    });

    const std::uint64_t s = best.index / z_count, z = best.index % z_count;
    BoundWitness w;
    for (int i = 0; i < n_c; ++i) {
        ClassicalAssignment a{i + 1, std::vector<int>(n + 1, 1)};
        if (i == 0) {
            for (int j = 1; j <= n; ++j) a.outcomes[j - 1] = ((s >> (j - 1)) & 1U) ? -1 : 1;
        }
        a.outcomes[n] = ((z >> i) & 1U) ? -1 : 1;
        w.classical.push_back(std::move(a));
    }
    const int z_all = z == 0 ? 1 : (z == z_all_minus ? -1 : 0);
    w.eigenvector = block_eigenvector(couplings[s], z_all, nq);
    if (kind == ProtocolKind::StarXY) {
        w.eigenvector = to_star_frame(w.eigenvector, detail::complement_nodes(n, w.classical));
    }
    return {n, n_c, best.value, BoundMethod::Reduced, kind, std::move(w)};
}

/// max over eps in {+-1}^k of |sum_j eps_j w_j|. The optimal pattern is
/// eps_j = sign(Re(w_j e^{-iu})) for the direction u of the optimal sum, and
/// that pattern only changes where some w_j is orthogonal to u, so checking
/// one direction inside every arc between those critical angles is exact.
inline double max_signed_sum(const std::vector<Complex>& w) {
    std::vector<double> cuts;
    for (const auto& z : w) {
        const double phi = std::arg(z);
        for (double c : {phi + std::numbers::pi / 2, phi - std::numbers::pi / 2}) {
            cuts.push_back(std::fmod(c + 4 * std::numbers::pi, 2 * std::numbers::pi));
        }
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.push_back(cuts.front() + 2 * std::numbers::pi);
    double best = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double u = 0.5 * (cuts[i] + cuts[i + 1]);
        Complex sum = 0.0;
        for (const auto& z : w) {
            const double proj = z.real() * std::cos(u) + z.imag() * std::sin(u);
            sum += proj >= 0 ? z : -z;
        }
        best = std::max(best, std::abs(sum));
    }
    return best;
}

inline BoundResult closed(int n, int n_c, ProtocolKind kind) {
    if (!is_xy_protocol(kind)) {
        throw std::invalid_argument("the closed method is defined for the ghz-xy and star-xy protocols");
    }
    const int nq = n - n_c;
    std::vector<Complex> w;
    for (int j = 1; j <= n; ++j) w.push_back(std::polar(1.0, j * nq * std::numbers::pi / n));
    const double m = max_signed_sum(w);
    // main block with all classical Z outcomes equal; the other blocks are bounded by 1/2
    const double bound = 0.25 + std::sqrt(1.0 / 16.0 + m * m / (4.0 * n * n));
    return {n, n_c, bound, BoundMethod::Closed, kind, std::nullopt};
}

}  // namespace detail

/// Largest fidelity reachable with exactly n_c classical nodes.
inline BoundResult max_classical_fidelity(int n, int n_c, BoundMethod method,
                                          ProtocolKind protocol = ProtocolKind::GhzXY) {
    detail::check_sizes(n, n_c);
    switch (method) {
        case BoundMethod::Brute: return detail::brute(make_decomposition(protocol, n), n_c);
        case BoundMethod::Reduced: return detail::reduced(n, n_c, protocol);
        case BoundMethod::Closed: return detail::closed(n, n_c, protocol);
    }
    throw std::logic_error("unreachable");
}

/// Largest fidelity reachable by any hybrid with 1 <= n_c <= n-1; n_c reports the maximizing size.
inline BoundResult classical_bound(int n, BoundMethod method, ProtocolKind protocol = ProtocolKind::GhzXY) {
    if (n < 2) throw std::invalid_argument("classical_bound: n must be at least 2");
    std::optional<BoundResult> best;
    for (int n_c = 1; n_c <= n - 1; ++n_c) {
        auto r = max_classical_fidelity(n, n_c, method, protocol);
        if (!best || r.bound > best->bound) best = std::move(r);
    }
    return *best;
}

/// (1 + sqrt(1 + 4 csc^2(pi/2n)/n^2))/4 for odd n, (1 + sqrt 3)/4 for even n.
inline double closed_form_bound(int n) {
    if (n < 2) throw std::invalid_argument("closed_form_bound: n must be at least 2");
    if (n % 2 == 0) return (1.0 + std::sqrt(3.0)) / 4.0;
    const double csc = 1.0 / std::sin(std::numbers::pi / (2.0 * n));
    return (1.0 + std::sqrt(1.0 + 4.0 * csc * csc / (static_cast<double>(n) * n))) / 4.0;
}

/// Top eigenvalue of the 2x2 operator left on the single quantum node when
/// n-1 nodes are classical and their products are chosen optimally:
/// [[1/2, sum_j e^{-i j pi/n}/(2n)], [sum_j e^{i j pi/n}/(2n), 0]].
inline double two_by_two_bound(int n) {
    if (n < 2) throw std::invalid_argument("two_by_two_bound: n must be at least 2");
    Complex off = 0.0;
    for (int j = 1; j <= n; ++j) off += std::polar(1.0, j * std::numbers::pi / n);
    off /= 2.0 * n;
    Matrix m(2, 2);
    m << 0.5, std::conj(off), off, 0.0;
    return hermitian_eigs(m).values(1);
}

enum class ExtremalCase { E1_3, E2_4, E3_4 };

inline std::string to_string(ExtremalCase c) {
    switch (c) {
        case ExtremalCase::E1_3: return "e1_3";
        case ExtremalCase::E2_4: return "e2_4";
        case ExtremalCase::E3_4: return "e3_4";
    }
    return "?";
}

inline ExtremalCase parse_extremal_case(std::string_view name) {
    if (name == "e1_3") return ExtremalCase::E1_3;
    if (name == "e2_4") return ExtremalCase::E2_4;
    if (name == "e3_4") return ExtremalCase::E3_4;
    throw std::invalid_argument("unknown extremal case '" + std::string(name) + "' (expected e1_3, e2_4 or e3_4)");
}

/// The three worked hybrids for the GHZ protocol:
///   e1_3  n=3, node 2 classical (all +1), nodes 1,3 in (a|00> + |11>), a = -1 + i sqrt3
///   e2_4  n=4, nodes 1,2 classical ({+1}^5 and {-1,1,1,-1,1}), nodes 3,4 in (-b|00> + |11>),
///         b = (1 + sqrt3) e^{i pi/4}/sqrt2
///   e3_4  n=4, nodes 2,3,4 classical ({+1}^5, {+1}^5, {-1,1,1,-1,1}), node 1 in (g|0> + |1>),
///         g = (2 + sqrt(2(4 + sqrt2)))/(1 + sqrt2 + i)
inline HybridNetwork extremal_hybrid(ExtremalCase which) {
    const double r3 = std::sqrt(3.0), r2 = std::sqrt(2.0);
    switch (which) {
        case ExtremalCase::E1_3: {
            Vector v = Vector::Zero(4);
            v(0) = Complex(-1.0, r3);
            v(3) = 1.0;
            return {3, {{2, {1, 1, 1, 1}}}, DensityMatrix::pure(StateVector::normalized(2, v))};
        }
        case ExtremalCase::E2_4: {
            Vector v = Vector::Zero(4);
            v(0) = -std::polar((1.0 + r3) / r2, std::numbers::pi / 4);
            v(3) = 1.0;
            return {4, {{1, {1, 1, 1, 1, 1}}, {2, {-1, 1, 1, -1, 1}}}, DensityMatrix::pure(StateVector::normalized(2, v))};
        }
        case ExtremalCase::E3_4: {
            Vector v(2);
            v(0) = (2.0 + std::sqrt(2.0 * (4.0 + r2))) / Complex(1.0 + r2, 1.0);
            v(1) = 1.0;
            return {4,
                    {{2, {1, 1, 1, 1, 1}}, {3, {1, 1, 1, 1, 1}}, {4, {-1, 1, 1, -1, 1}}},
                    DensityMatrix::pure(StateVector::normalized(1, v))};
        }
    }
    throw std::logic_error("unreachable");
}

/// The argmax hybrid of the reduced search for (n, n_c) under the GHZ protocol.
inline HybridNetwork extremal_hybrid(int n, int n_c) {
    const auto r = max_classical_fidelity(n, n_c, BoundMethod::Reduced);
    const auto& w = *r.witness;
    return {n, w.classical, DensityMatrix::pure(StateVector::normalized(n - n_c, w.eigenvector))};
}

}  // namespace netcert
