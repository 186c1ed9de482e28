#pragma once

// Measurement-setting observables and projector decompositions.
//
// Setting indices for the two N+1-setting protocols (ghz-xy, star-xy):
//   0        identity (marginalized)
//   1..n     the XY-plane observable at angle m*pi/n (rotated for star leaves)
//   n+1      the Z-type observable (X for star leaves)
// Pauli protocol: 0 = I, 1 = X, 2 = Y, 3 = Z.

#include "netcert/errors.hpp"
#include "netcert/qcore.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace netcert {

enum class ProtocolKind { GhzXY, StarXY, Pauli };

inline std::string to_string(ProtocolKind kind) {
    switch (kind) {
        case ProtocolKind::GhzXY: return "ghz-xy";
        case ProtocolKind::StarXY: return "star-xy";
        case ProtocolKind::Pauli: return "pauli";
    }
    return "?";
}

inline ProtocolKind parse_protocol(std::string_view name) {
    if (name == "ghz-xy") return ProtocolKind::GhzXY;
    if (name == "star-xy") return ProtocolKind::StarXY;
    if (name == "pauli") return ProtocolKind::Pauli;
    throw std::invalid_argument("unknown protocol '" + std::string(name) + "' (expected ghz-xy, star-xy or pauli)");
}

inline bool is_xy_protocol(ProtocolKind kind) { return kind != ProtocolKind::Pauli; }

/// Single-qubit +-1 observable x X + y Y + z Z, or the identity.
class Observable {
public:
    static Observable identity() { return Observable(); }

    static Observable from_bloch(double x, double y, double z) {
        const double norm = std::sqrt(x * x + y * y + z * z);
        if (std::abs(norm - 1.0) > 1e-12) throw std::invalid_argument("Observable: Bloch vector must have unit length");
        Observable o;
        o.identity_ = false;
        o.bloch_ = {x, y, z};
        return o;
    }

    bool is_identity() const { return identity_; }
    const std::array<double, 3>& bloch() const { return bloch_; }

    Mat2 matrix() const {
        if (identity_) return pauli::I();
        // exact zeros keep the product monomial (see LocalProduct)
        Mat2 m;
        m << bloch_[2], Complex(bloch_[0], -bloch_[1]), Complex(bloch_[0], bloch_[1]), -bloch_[2];
        return m;
    }

private:
    Observable() = default;
    bool identity_ = true;
    std::array<double, 3> bloch_{0.0, 0.0, 0.0};
};

namespace detail {

inline void check_setting_index(int n, int m, int lo) {
    if (n < 2) throw std::invalid_argument("observable: n must be at least 2");
    if (m < lo || m > n + 1) {
        throw std::invalid_argument("observable: setting index " + std::to_string(m) + " outside [" +
                                    std::to_string(lo) + ", " + std::to_string(n + 1) + "]");
    }
}

// cos/sin of m*pi/n with exact zeros and ones where they belong
inline std::pair<double, double> angle(int m, int n) {
    if ((2 * m) % n == 0) {
        switch (((2 * m) / n) % 4) {
            case 0: return {1.0, 0.0};
            case 1: return {0.0, 1.0};
            case 2: return {-1.0, 0.0};
            default: return {0.0, -1.0};
        }
    }
    const double t = m * std::numbers::pi / n;
    return {std::cos(t), std::sin(t)};
}

}  // namespace detail

/// cos(m pi/n) X + sin(m pi/n) Y for 1 <= m <= n, Z for m = n+1; the same on every node.
inline Observable ghz_observable(int n, int m, int /*node*/ = 1) {
    detail::check_setting_index(n, m, 1);
    if (m == n + 1) return Observable::from_bloch(0, 0, 1);
    auto [c, s] = detail::angle(m, n);
    return Observable::from_bloch(c, s, 0);
}

/// Center (node 1) uses the GHZ observables; leaves use cos Z - sin Y, and X for m = n+1.
inline Observable star_observable(int n, int m, int node) {
    detail::check_setting_index(n, m, 1);
    if (node < 1 || node > n) throw std::invalid_argument("star_observable: node out of range");
    if (node == 1) return ghz_observable(n, m, node);
    if (m == n + 1) return Observable::from_bloch(1, 0, 0);
    auto [c, s] = detail::angle(m, n);
    return Observable::from_bloch(0, s == 0.0 ? 0.0 : -s, c);
}

inline Observable pauli_observable(int m) {
    switch (m) {
        case 0: return Observable::identity();
        case 1: return Observable::from_bloch(1, 0, 0);
        case 2: return Observable::from_bloch(0, 1, 0);
        case 3: return Observable::from_bloch(0, 0, 1);
        default: throw std::invalid_argument("pauli_observable: index must be 0..3");
    }
}

using Setting = std::vector<int>;

inline std::string format_setting(const Setting& s) {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < s.size(); ++i) os << (i ? "," : "") << s[i];
    os << ')';
    return os.str();
}

struct Term {
    double coeff;
    Setting setting;  // one index per node, node 1 first
};

/// Target projector written as sum_terms coeff * (tensor product of observables).
class Decomposition {
public:
    Decomposition(int n, ProtocolKind kind, std::vector<Term> terms) : n_(n), kind_(kind), terms_(std::move(terms)) {
        if (n < 2) throw std::invalid_argument("Decomposition: n must be at least 2");
        for (const auto& t : terms_) validate_setting(t.setting);
    }

    int num_qubits() const { return n_; }
    ProtocolKind kind() const { return kind_; }
    const std::vector<Term>& terms() const { return terms_; }

    /// Index of the Z-type setting, the context identity entries are charged to.
    int z_index() const { return kind_ == ProtocolKind::Pauli ? 3 : n_ + 1; }

    /// Number of non-identity observables per node, i.e. the length of a classical outcome table.
    int outcomes_per_node() const { return z_index(); }

    Observable observable(int node, int m) const {
        if (m == 0) return Observable::identity();
        switch (kind_) {
            case ProtocolKind::GhzXY: return ghz_observable(n_, m, node);
            case ProtocolKind::StarXY: return star_observable(n_, m, node);
            case ProtocolKind::Pauli: return pauli_observable(m);
        }
        throw std::logic_error("unreachable");
    }

    void validate_setting(const Setting& s) const {
        if (static_cast<int>(s.size()) != n_) {
            throw std::invalid_argument("setting " + format_setting(s) + " must have one entry per node");
        }
        for (int m : s) {
            if (m < 0 || m > z_index()) {
                throw std::invalid_argument("setting " + format_setting(s) + " has an index outside [0, " +
                                            std::to_string(z_index()) + "]");
            }
        }
    }

    /// Tensor product of the setting's observables restricted to `nodes` (1-based, ascending).
    LocalProduct operator_on(const Setting& s, const std::vector<int>& nodes) const {
        std::vector<Mat2> factors;
        factors.reserve(nodes.size());
        for (int k : nodes) factors.push_back(observable(k, s[k - 1]).matrix());
        return LocalProduct(std::move(factors));
    }

    LocalProduct term_operator(const Setting& s) const {
        std::vector<int> all(n_);
        for (int k = 0; k < n_; ++k) all[k] = k + 1;
        return operator_on(s, all);
    }

    /// sum_terms coeff * operator, as a dense 2^n x 2^n matrix.
    Matrix assemble() const {
        const auto d = static_cast<Eigen::Index>(dim_of(n_));
        Matrix acc = Matrix::Zero(d, d);
        for (const auto& t : terms_) term_operator(t.setting).accumulate(acc, t.coeff);
        return acc;
    }

private:
    int n_;
    ProtocolKind kind_;
    std::vector<Term> terms_;
};

namespace detail {

// Z-part shared by all protocols: setting vectors over {0, z} whose
// coefficient is <G_n| Z-string |G_n> / 2^n, evaluated directly and snapped to {0, 1}.
inline std::vector<Term> z_part(int n, int z) {
    const StateVector ghz = ghz_state(n);
    const std::uint64_t support[2] = {0, dim_of(n) - 1};
    const double scale = std::pow(2.0, -n);
    std::vector<Term> terms;
    for (std::uint64_t mask = 0; mask < dim_of(n); ++mask) {
        Setting s(n, 0);
        std::vector<Mat2> factors(n, pauli::I());
        for (int k = 0; k < n; ++k) {
            if ((mask >> (n - 1 - k)) & 1U) {
                s[k] = z;
                factors[k] = pauli::Z();
            }
        }
        const LocalProduct op(std::move(factors));
        Complex c = 0;
        for (auto r : support) {
            for (auto col : support) c += std::conj(ghz[r]) * op.element(r, col) * ghz[col];
        }
        if (std::abs(c.imag()) > 1e-9) throw std::logic_error("z_part: non-real GHZ expectation");
        if (std::abs(c.real() - 1.0) <= 1e-9) {
            terms.push_back({scale, s});
        } else if (std::abs(c.real()) > 1e-9) {
            throw std::logic_error("z_part: GHZ Z-string expectation not in {0, 1}");
        }
    }
    return terms;
}

inline std::vector<Term> xy_terms(int n) {
    std::vector<Term> terms = z_part(n, n + 1);
    for (int j = 1; j <= n; ++j) terms.push_back({((j % 2) ? -1.0 : 1.0) / (2.0 * n), Setting(n, j)});
    return terms;
}

}  // namespace detail

inline Decomposition ghz_decomposition(int n) {
    if (n < 2) throw std::invalid_argument("ghz_decomposition: n must be at least 2");
    return {n, ProtocolKind::GhzXY, detail::xy_terms(n)};
}

inline Decomposition star_decomposition(int n) {
    if (n < 2) throw std::invalid_argument("star_decomposition: n must be at least 2");
    return {n, ProtocolKind::StarXY, detail::xy_terms(n)};
}

/// Stabilizer-group expansion: 2^(n-1) even Z-strings plus X^n times each of them,
/// where X^n Z_S = (-1)^(|S|/2) (Y on S, X elsewhere).
inline Decomposition pauli_decomposition(int n) {
    if (n < 2) throw std::invalid_argument("pauli_decomposition: n must be at least 2");
    std::vector<Term> terms = detail::z_part(n, 3);
    const double scale = std::pow(2.0, -n);
    for (std::uint64_t mask = 0; mask < dim_of(n); ++mask) {
        const int weight = std::popcount(mask);
        if (weight % 2) continue;
        Setting s(n, 1);
        for (int k = 0; k < n; ++k) {
            if ((mask >> (n - 1 - k)) & 1U) s[k] = 2;
        }
        terms.push_back({(weight / 2) % 2 ? -scale : scale, s});
    }
    return {n, ProtocolKind::Pauli, std::move(terms)};
}

inline Decomposition make_decomposition(ProtocolKind kind, int n) {
    switch (kind) {
        case ProtocolKind::GhzXY: return ghz_decomposition(n);
        case ProtocolKind::StarXY: return star_decomposition(n);
        case ProtocolKind::Pauli: return pauli_decomposition(n);
    }
    throw std::logic_error("unreachable");
}

/// The state whose projector the protocol decomposes.
inline StateVector target_state(ProtocolKind kind, int n) {
    return kind == ProtocolKind::StarXY ? star_state(n) : ghz_state(n);
}

/// The physical measurement context a setting is read from: identity entries
/// are marginals of the Z-type context.
inline Setting measurement_context(const Decomposition& d, const Setting& s) {
    Setting ctx = s;
    for (int& m : ctx) {
        if (m == 0) m = d.z_index();
    }
    return ctx;
}

/// Distinct measurement contexts, in ascending lexicographic order.
inline std::vector<Setting> measurement_contexts(const Decomposition& d) {
    std::set<Setting> ctx;
    for (const auto& t : d.terms()) ctx.insert(measurement_context(d, t.setting));
    return {ctx.begin(), ctx.end()};
}

inline int setting_count(const Decomposition& d) { return static_cast<int>(measurement_contexts(d).size()); }

struct Estimate {
    double value = 0.0;
    double std_error = 0.0;
};

using ExpectationMap = std::map<Setting, Estimate>;

/// sum coeff * <setting>, with standard errors combined in quadrature.
/// The all-identity term contributes its coefficient whether or not it is in `e`.
inline Estimate fidelity_from_expectations(const Decomposition& d, const ExpectationMap& e) {
    double value = 0.0, var = 0.0;
    std::vector<Setting> missing;
    for (const auto& t : d.terms()) {
        if (std::all_of(t.setting.begin(), t.setting.end(), [](int m) { return m == 0; })) {
            value += t.coeff;
            continue;
        }
        const auto it = e.find(t.setting);
        if (it == e.end()) {
            missing.push_back(t.setting);
            continue;
        }
        value += t.coeff * it->second.value;
        var += t.coeff * t.coeff * it->second.std_error * it->second.std_error;
    }
    if (!missing.empty()) {
        std::string msg = "incomplete expectation data; missing settings:";
        for (const auto& s : missing) msg += " " + format_setting(s);
        throw IncompleteDataError(msg, std::move(missing));
    }
    return {value, std::sqrt(var)};
}

inline ExpectationMap exact_expectations(const DensityMatrix& rho, const Decomposition& d) {
    if (rho.num_qubits() != d.num_qubits()) throw std::invalid_argument("exact_expectations: dimension mismatch");
    ExpectationMap out;
    for (const auto& t : d.terms()) {
        const Complex v = d.term_operator(t.setting).trace_with(rho.matrix());
        if (std::abs(v.imag()) > 1e-10) throw std::logic_error("exact_expectations: non-real expectation value");
        out[t.setting] = {v.real(), 0.0};
    }
    return out;
}

}  // namespace netcert
