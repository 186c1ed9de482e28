#pragma once

// Finite-shot measurement simulation and scenario runs.

#include "netcert/bounds.hpp"
#include "netcert/certify.hpp"
#include "netcert/hybrid.hpp"
#include "netcert/protocol.hpp"
#include "netcert/qcore.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

namespace netcert {

/// Counts for one measurement context. Outcome strings list node 1 first;
/// '0' is the +1 eigenvalue of that node's observable, '1' is -1.
struct MeasurementRecord {
    Setting setting;
    std::int64_t shots = 0;
    std::map<std::string, std::int64_t> counts;

    friend bool operator==(const MeasurementRecord&, const MeasurementRecord&) = default;
};

/// Records of one protocol run; the unit stored in records files.
struct RecordSet {
    int n = 0;
    ProtocolKind protocol = ProtocolKind::GhzXY;
    std::vector<MeasurementRecord> records;

    friend bool operator==(const RecordSet&, const RecordSet&) = default;
};

using Source = std::variant<DensityMatrix, HybridNetwork>;

inline int source_nodes(const Source& s) {
    return std::visit(
        [](const auto& v) {
            if constexpr (std::is_same_v<std::decay_t<decltype(v)>, DensityMatrix>) {
                return v.num_qubits();
            } else {
                return v.num_nodes();
            }
        },
        s);
}

/// Stable per-setting stream seed; independent of the order settings are sampled in.
inline std::uint64_t derive_seed(std::uint64_t seed, const Setting& s) {
    auto mix = [](std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    std::uint64_t h = mix(seed ^ (0x6a09e667f3bcc908ULL + s.size()));
    for (int m : s) h = mix(h ^ static_cast<std::uint64_t>(m));
    return h;
}

namespace detail {

// Rows are the +1 and -1 eigenvectors (conjugated), so U rho U^dagger is diagonal-readable.
inline Mat2 measurement_basis(const Observable& o) {
    if (o.is_identity()) return pauli::I();
    const auto es = hermitian_eigs(Matrix(o.matrix()));
    Mat2 u;
    u.row(0) = es.vectors.col(1).adjoint();
    u.row(1) = es.vectors.col(0).adjoint();
    return u;
}

inline Matrix apply_left(const Matrix& m, const Mat2& u, int node, int n) {
    Matrix out(m.rows(), m.cols());
    for (Eigen::Index c = 0; c < m.cols(); ++c) out.col(c) = apply_local(m.col(c), u, node, n);
    return out;
}

}  // namespace detail

/// Joint outcome distribution of the quantum nodes for a measurement context,
/// indexed like the basis of the quantum register.
inline std::vector<double> quantum_outcome_probabilities(const DensityMatrix& rho, const Decomposition& d,
                                                         const Setting& context, const std::vector<int>& nodes) {
    const int nq = rho.num_qubits();
    Matrix m = rho.matrix();
    for (int i = 0; i < nq; ++i) {
        const Mat2 u = detail::measurement_basis(d.observable(nodes[i], context[nodes[i] - 1]));
        m = detail::apply_left(m, u, i + 1, nq);
        m = detail::apply_left(m.adjoint(), u, i + 1, nq).adjoint();
    }
    std::vector<double> p(static_cast<std::size_t>(m.rows()));
    for (Eigen::Index i = 0; i < m.rows(); ++i) p[static_cast<std::size_t>(i)] = std::max(0.0, m(i, i).real());
    return p;
}

/// Draws `shots` outcomes of one measurement context. Identity entries are
/// measured in the Z-type context; classical nodes answer from their tables.
inline MeasurementRecord sample_setting(const Source& source, const Decomposition& d, const Setting& setting,
                                        std::int64_t shots, std::uint64_t seed) {
    const int n = d.num_qubits();
    if (source_nodes(source) != n) throw std::invalid_argument("sample_setting: source has the wrong node count");
    d.validate_setting(setting);
    if (shots <= 0) throw std::invalid_argument("sample_setting: shots must be positive");
    const Setting context = measurement_context(d, setting);

    std::vector<int> qnodes;
    const DensityMatrix* rho = nullptr;
    std::string classical_bits(static_cast<std::size_t>(n), '?');
    if (const auto* h = std::get_if<HybridNetwork>(&source)) {
        detail::check_table_lengths(d, h->classical());
        qnodes = h->quantum_nodes();
        rho = &h->quantum_state();
        for (const auto& c : h->classical()) classical_bits[c.node - 1] = c.outcome(context[c.node - 1]) == 1 ? '0' : '1';
    } else {
        rho = &std::get<DensityMatrix>(source);
        for (int k = 1; k <= n; ++k) qnodes.push_back(k);
    }
    const auto probs = quantum_outcome_probabilities(*rho, d, context, qnodes);
    const int nq = static_cast<int>(qnodes.size());

    // multinomial draw as a chain of conditional binomials
    std::mt19937_64 rng(derive_seed(seed, context));
    MeasurementRecord rec{context, shots, {}};
    std::int64_t left = shots;
    double mass = 1.0;
    for (std::size_t i = 0; i < probs.size() && left > 0; ++i) {
        std::int64_t k = left;
        if (i + 1 < probs.size()) {
            const double q = mass > 0 ? std::clamp(probs[i] / mass, 0.0, 1.0) : 0.0;
            k = std::binomial_distribution<std::int64_t>(left, q)(rng);
        }
        mass -= probs[i];
        left -= k;
        if (k == 0) continue;
        std::string key = classical_bits;
        for (int j = 0; j < nq; ++j) key[qnodes[j] - 1] = ((i >> (nq - 1 - j)) & 1U) ? '1' : '0';
        rec.counts[key] += k;
    }
    return rec;
}

/// Mean of the product of +-1 outcomes over the nodes where `setting` is not the identity.
inline Estimate expectation_from_record(const MeasurementRecord& r, const Setting& setting) {
    if (r.shots <= 0) throw std::invalid_argument("expectation_from_record: record has no shots");
    if (setting.size() != r.setting.size()) throw std::invalid_argument("expectation_from_record: length mismatch");
    for (std::size_t k = 0; k < setting.size(); ++k) {
        if (setting[k] != 0 && setting[k] != r.setting[k]) {
            throw std::invalid_argument("expectation_from_record: setting " + format_setting(setting) +
                                        " is not measured by context " + format_setting(r.setting));
        }
    }
    std::int64_t signed_total = 0;
    for (const auto& [bits, count] : r.counts) {
        int parity = 1;
        for (std::size_t k = 0; k < setting.size(); ++k) {
            if (setting[k] != 0 && bits[k] == '1') parity = -parity;
        }
        signed_total += parity * count;
    }
    const double shots = static_cast<double>(r.shots);
    const double value = static_cast<double>(signed_total) / shots;
    return {value, std::sqrt(std::max(0.0, 1.0 - value * value) / shots)};
}

/// Expectations for every term that some record measures (exact setting preferred,
/// otherwise its measurement context). Terms without data are left out.
inline ExpectationMap expectations_from_records(const Decomposition& d, const std::vector<MeasurementRecord>& records) {
    std::map<Setting, const MeasurementRecord*> by_setting;
    for (const auto& r : records) by_setting.emplace(r.setting, &r);
    ExpectationMap out;
    for (const auto& t : d.terms()) {
        auto it = by_setting.find(t.setting);
        if (it == by_setting.end()) it = by_setting.find(measurement_context(d, t.setting));
        if (it == by_setting.end()) continue;
        out[t.setting] = expectation_from_record(*it->second, t.setting);
    }
    return out;
}

inline CertificationResult certify_records(const RecordSet& rs) {
    const Decomposition d = make_decomposition(rs.protocol, rs.n);
    return certify(fidelity_from_expectations(d, expectations_from_records(d, rs.records)), rs.n, rs.protocol);
}

enum class SourceKind { Ghz, Star, WhiteNoise, Hybrid, Custom };

struct Scenario {
    std::string name;
    SourceKind source = SourceKind::Ghz;
    int n = 3;
    double p = 0.0;                              // white-noise fraction
    ExtremalCase hybrid_case = ExtremalCase::E1_3;
    std::optional<DensityMatrix> custom_state;
    ProtocolKind protocol = ProtocolKind::GhzXY;
    std::int64_t shots = 10000;
    std::uint64_t seed = 0;
};

inline Source resolve_source(const Scenario& s) {
    switch (s.source) {
        case SourceKind::Ghz: return DensityMatrix::pure(ghz_state(s.n));
        case SourceKind::Star: return DensityMatrix::pure(star_state(s.n));
        case SourceKind::WhiteNoise: return white_noise_mix(target_state(s.protocol, s.n), s.p);
        case SourceKind::Hybrid: return extremal_hybrid(s.hybrid_case);
        case SourceKind::Custom:
            if (!s.custom_state) throw std::invalid_argument("custom scenario needs a density matrix");
            return *s.custom_state;
    }
    throw std::logic_error("unreachable");
}

struct ScenarioRun {
    RecordSet records;
    CertificationResult result;
};

/// Samples every measurement context of the protocol and certifies the result.
inline ScenarioRun run_scenario(const Scenario& s) {
    const Source source = resolve_source(s);
    const int n = source_nodes(source);
    const Decomposition d = make_decomposition(s.protocol, n);
    RecordSet rs{n, s.protocol, {}};
    for (const auto& ctx : measurement_contexts(d)) rs.records.push_back(sample_setting(source, d, ctx, s.shots, s.seed));
    const auto result = certify_records(rs);
    return {std::move(rs), result};
}

}  // namespace netcert
