#pragma once

// Entanglement-witness and steering verdicts, white-noise tolerance.

#include "netcert/bounds.hpp"
#include "netcert/hybrid.hpp"
#include "netcert/protocol.hpp"
#include "netcert/qcore.hpp"

#include <cmath>
#include <optional>
#include <vector>

namespace netcert {

/// Biseparable states cannot exceed fidelity 1/2 with a GHZ/star target.
inline constexpr double kBiseparableBound = 0.5;

/// One-classical-node bound of the 2^(n-1)+1-setting Pauli criterion, (1 + sqrt 3)/4.
inline double pauli_baseline_bound() { return (1.0 + std::sqrt(3.0)) / 4.0; }

/// Fidelities from exact (noise-free) evaluation closer than this are treated as equal.
inline constexpr double kExactResolution = 1e-12;

/// Threshold a fidelity must strictly exceed to certify genuine n-node steering.
/// For the xy protocols this is the exact hybrid maximum over all classical
/// node counts; for the Pauli protocol the baseline bound.
inline double steering_bound(int n, ProtocolKind kind) {
    if (n < 2) throw std::invalid_argument("steering_bound: n must be at least 2");
    if (kind == ProtocolKind::Pauli) return pauli_baseline_bound();
    return classical_bound(n, BoundMethod::Closed, kind).bound;
}

inline bool ew_verdict(double f) { return f > kBiseparableBound; }

inline bool steering_verdict(double f, int n, ProtocolKind kind) { return f > steering_bound(n, kind); }

/// White-noise fraction p at which tr(|G><G| rho(p)) drops to the steering bound:
/// (1 - p) + p/2^n = bound.
inline double noise_threshold(int n, ProtocolKind kind) {
    const double bound = steering_bound(n, kind);
    return (1.0 - bound) / (1.0 - std::ldexp(1.0, -n));
}

/// Same threshold found by bisection on the fidelity of the noisy state.
inline double noise_threshold_bisection(int n, ProtocolKind kind, double tol = 1e-12) {
    const double bound = steering_bound(n, kind);
    const StateVector target = target_state(kind, n);
    double lo = 0.0, hi = 1.0;  // fidelity decreases with p
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (white_noise_fidelity(target, mid, target) > bound) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

struct NoiseRow {
    int n;
    double p_xy;
    double p_pauli;
};

inline std::vector<NoiseRow> noise_comparison(int n_max) {
    if (n_max < 2 || n_max > 14) throw std::invalid_argument("noise_comparison: n_max must lie in [2, 14]");
    std::vector<NoiseRow> rows;
    for (int n = 2; n <= n_max; ++n) {
        rows.push_back({n, noise_threshold(n, ProtocolKind::GhzXY), noise_threshold(n, ProtocolKind::Pauli)});
    }
    return rows;
}

struct CertificationResult {
    int n = 0;
    ProtocolKind protocol = ProtocolKind::GhzXY;
    double fidelity = 0.0;
    double std_error = 0.0;
    bool ew_positive = false;
    bool steering_positive = false;
    double bound_used = 0.0;
    std::optional<double> margin_sigmas;  // (fidelity - bound)/std_error, absent when std_error is 0
    bool marginal_flag = false;

    friend bool operator==(const CertificationResult&, const CertificationResult&) = default;
};

/// Verdicts for a fidelity estimate. With std_error > 0 the comparisons are
/// strict and the marginal flag marks |f - bound| < 3 sigma; with std_error 0
/// the value is exact and differences below kExactResolution count as equality.
inline CertificationResult certify(Estimate f, int n, ProtocolKind kind) {
    CertificationResult r;
    r.n = n;
    r.protocol = kind;
    r.fidelity = f.value;
    r.std_error = f.std_error;
    r.bound_used = steering_bound(n, kind);
    const double resolution = f.std_error > 0 ? 0.0 : kExactResolution;
    r.ew_positive = f.value - kBiseparableBound > resolution;
    r.steering_positive = f.value - r.bound_used > resolution;
    if (f.std_error > 0) {
        r.margin_sigmas = (f.value - r.bound_used) / f.std_error;
        r.marginal_flag = std::abs(*r.margin_sigmas) < 3.0;
    } else {
        r.marginal_flag = std::abs(f.value - r.bound_used) <= kExactResolution;
    }
    return r;
}

inline CertificationResult certify(const ExpectationMap& e, int n, ProtocolKind kind) {
    return certify(fidelity_from_expectations(make_decomposition(kind, n), e), n, kind);
}

inline CertificationResult certify(const DensityMatrix& rho, ProtocolKind kind) {
    const int n = rho.num_qubits();
    return certify(Estimate{fidelity(rho, target_state(kind, n)), 0.0}, n, kind);
}

inline CertificationResult certify(const HybridNetwork& h, ProtocolKind kind) {
    const int n = h.num_nodes();
    return certify(Estimate{hybrid_fidelity(h, make_decomposition(kind, n)), 0.0}, n, kind);
}

}  // namespace netcert
