#pragma once

// JSON documents and CSV tables. Schemas for the JSON documents live in schemas/.

#include "netcert/bounds.hpp"
#include "netcert/certify.hpp"
#include "netcert/errors.hpp"
#include "netcert/harness.hpp"
#include "netcert/hybrid.hpp"
#include "netcert/protocol.hpp"

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <string>

namespace netcert::io {

using json = nlohmann::json;

/// Rounds to 9 significant digits, the precision of every number the CLI prints.
inline double round9(double v) {
    if (!std::isfinite(v) || v == 0.0) return v;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return std::strtod(buf, nullptr);
}

inline json complex_matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
        rows.push_back(std::move(row));
    }
    return rows;
}

inline json complex_vector_to_json(const Vector& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back({v(i).real(), v(i).imag()});
    return out;
}

namespace detail {

inline const json& require(const json& j, const std::string& key, const std::string& path) {
    if (!j.is_object()) throw SchemaError(path, "expected an object");
    const auto it = j.find(key);
    if (it == j.end()) throw SchemaError(path + "/" + key, "required field is missing");
    return *it;
}

inline std::int64_t require_int(const json& j, const std::string& path) {
    if (!j.is_number_integer()) throw SchemaError(path, "expected an integer");
    return j.get<std::int64_t>();
}

inline double require_number(const json& j, const std::string& path) {
    if (!j.is_number()) throw SchemaError(path, "expected a number");
    return j.get<double>();
}

inline Complex require_complex(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 2) throw SchemaError(path, "expected a [re, im] pair");
    return {require_number(j[0], path + "/0"), require_number(j[1], path + "/1")};
}

}  // namespace detail

inline Matrix complex_matrix_from_json(const json& j, const std::string& path = "") {
    if (!j.is_array() || j.empty()) throw SchemaError(path, "expected a non-empty array of rows");
    const auto d = static_cast<Eigen::Index>(j.size());
    Matrix m(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        const auto& row = j[static_cast<std::size_t>(i)];
        const std::string rp = path + "/" + std::to_string(i);
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != d) throw SchemaError(rp, "expected a row of length " + std::to_string(d));
        for (Eigen::Index c = 0; c < d; ++c) {
            m(i, c) = detail::require_complex(row[static_cast<std::size_t>(c)], rp + "/" + std::to_string(c));
        }
    }
    return m;
}

inline DensityMatrix density_matrix_from_json(const json& j, const std::string& path = "") {
    Matrix m = complex_matrix_from_json(j, path);
    int n = 0;
    try {
        n = qubits_of(m.rows());
        return {n, std::move(m)};
    } catch (const std::invalid_argument& e) {
        throw SchemaError(path, e.what());
    }
}

inline json to_json(const Decomposition& d) {
    json terms = json::array();
    for (const auto& t : d.terms()) terms.push_back({{"coeff", t.coeff}, {"setting", t.setting}});
    return {{"n", d.num_qubits()}, {"protocol", to_string(d.kind())}, {"terms", std::move(terms)}};
}

inline json to_json(const ClassicalAssignment& c) { return {{"node", c.node}, {"outcomes", c.outcomes}}; }

inline json to_json(const HybridNetwork& h) {
    json classical = json::array();
    for (const auto& c : h.classical()) classical.push_back(to_json(c));
    return {{"n", h.num_nodes()},
            {"classical", std::move(classical)},
            {"quantum_state", complex_matrix_to_json(h.quantum_state().matrix())}};
}

inline HybridNetwork hybrid_from_json(const json& j) {
    const int n = static_cast<int>(detail::require_int(detail::require(j, "n", ""), "/n"));
    const auto& cl = detail::require(j, "classical", "");
    if (!cl.is_array()) throw SchemaError("/classical", "expected an array");
    std::vector<ClassicalAssignment> classical;
    for (std::size_t i = 0; i < cl.size(); ++i) {
        const std::string p = "/classical/" + std::to_string(i);
        ClassicalAssignment a;
        a.node = static_cast<int>(detail::require_int(detail::require(cl[i], "node", p), p + "/node"));
        const auto& out = detail::require(cl[i], "outcomes", p);
        if (!out.is_array()) throw SchemaError(p + "/outcomes", "expected an array");
        for (std::size_t k = 0; k < out.size(); ++k) {
            a.outcomes.push_back(static_cast<int>(detail::require_int(out[k], p + "/outcomes/" + std::to_string(k))));
        }
        classical.push_back(std::move(a));
    }
    return {n, std::move(classical), density_matrix_from_json(detail::require(j, "quantum_state", ""), "/quantum_state")};
}

inline json to_json(const BoundResult& r) {
    json j = {{"n", r.n},
              {"n_c", r.n_c ? json(*r.n_c) : json(nullptr)},
              {"bound", r.bound},
              {"method", to_string(r.method)},
              {"protocol", to_string(r.protocol)}};
    if (r.witness) {
        json classical = json::array();
        for (const auto& c : r.witness->classical) classical.push_back(to_json(c));
        j["witness"] = {{"classical", std::move(classical)}, {"eigenvector", complex_vector_to_json(r.witness->eigenvector)}};
    } else {
        j["witness"] = nullptr;
    }
    return j;
}

inline json to_json(const CertificationResult& r) {
    return {{"n", r.n},
            {"protocol", to_string(r.protocol)},
            {"fidelity", r.fidelity},
            {"stderr", r.std_error},
            {"ew_positive", r.ew_positive},
            {"steering_positive", r.steering_positive},
            {"bound_used", r.bound_used},
            {"margin_sigmas", r.margin_sigmas ? json(*r.margin_sigmas) : json(nullptr)},
            {"marginal_flag", r.marginal_flag}};
}

inline json to_json(const RecordSet& rs) {
    json records = json::array();
    for (const auto& r : rs.records) {
        json counts = json::object();
        for (const auto& [bits, c] : r.counts) counts[bits] = c;
        records.push_back({{"setting", r.setting}, {"shots", r.shots}, {"counts", std::move(counts)}});
    }
    return {{"n", rs.n}, {"protocol", to_string(rs.protocol)}, {"records", std::move(records)}};
}

/// Parses and validates a records document; SchemaError carries the offending JSON pointer.
inline RecordSet records_from_json(const json& j) {
    if (!j.is_object()) throw SchemaError("", "expected an object");
    RecordSet rs;
    const auto n = detail::require_int(detail::require(j, "n", ""), "/n");
    if (n < 2 || n > 20) throw SchemaError("/n", "node count must lie in [2, 20]");
    rs.n = static_cast<int>(n);
    const auto& proto = detail::require(j, "protocol", "");
    if (!proto.is_string()) throw SchemaError("/protocol", "expected a string");
    try {
        rs.protocol = parse_protocol(proto.get<std::string>());
    } catch (const std::invalid_argument& e) {
        throw SchemaError("/protocol", e.what());
    }
    const int max_index = rs.protocol == ProtocolKind::Pauli ? 3 : rs.n + 1;
    const auto& recs = detail::require(j, "records", "");
    if (!recs.is_array()) throw SchemaError("/records", "expected an array");
    for (std::size_t i = 0; i < recs.size(); ++i) {
        const std::string p = "/records/" + std::to_string(i);
        MeasurementRecord r;
        const auto& setting = detail::require(recs[i], "setting", p);
        if (!setting.is_array() || static_cast<int>(setting.size()) != rs.n) {
            throw SchemaError(p + "/setting", "expected an array of " + std::to_string(rs.n) + " setting indices");
        }
        for (std::size_t k = 0; k < setting.size(); ++k) {
            const auto m = detail::require_int(setting[k], p + "/setting/" + std::to_string(k));
            if (m < 0 || m > max_index) throw SchemaError(p + "/setting/" + std::to_string(k), "setting index out of range");
            r.setting.push_back(static_cast<int>(m));
        }
        r.shots = detail::require_int(detail::require(recs[i], "shots", p), p + "/shots");
        if (r.shots <= 0) throw SchemaError(p + "/shots", "shots must be positive");
        const auto& counts = detail::require(recs[i], "counts", p);
        if (!counts.is_object()) throw SchemaError(p + "/counts", "expected an object");
        std::int64_t total = 0;
        for (const auto& [bits, c] : counts.items()) {
            const std::string cp = p + "/counts/" + bits;
            if (static_cast<int>(bits.size()) != rs.n || bits.find_first_not_of("01") != std::string::npos) {
                throw SchemaError(cp, "outcome keys must be bitstrings of length " + std::to_string(rs.n));
            }
            const auto v = detail::require_int(c, cp);
            if (v < 0) throw SchemaError(cp, "counts must be nonnegative");
            r.counts[bits] = v;
            total += v;
        }
        if (total != r.shots) throw SchemaError(p + "/counts", "counts sum to " + std::to_string(total) + ", shots is " + std::to_string(r.shots));
        rs.records.push_back(std::move(r));
    }
    return rs;
}

/// Applies round9 to every floating-point number in a document.
inline json rounded(json j) {
    if (j.is_number_float()) return round9(j.get<double>());
    if (j.is_structured()) {
        for (auto& v : j) v = rounded(std::move(v));
    }
    return j;
}

inline void write_bound_csv(std::ostream& os, const std::vector<BoundResult>& rows) {
    os << "n,n_c,bound,method,protocol\n";
    char buf[32];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%.9g", r.bound);
        os << r.n << ',' << (r.n_c ? std::to_string(*r.n_c) : "") << ',' << buf << ',' << to_string(r.method) << ','
           << to_string(r.protocol) << '\n';
    }
}

inline void write_noise_csv(std::ostream& os, const std::vector<NoiseRow>& rows) {
    os << "n,p_xy,p_pauli\n";
    char a[32], b[32];
    for (const auto& r : rows) {
        std::snprintf(a, sizeof a, "%.9g", r.p_xy);
        std::snprintf(b, sizeof b, "%.9g", r.p_pauli);
        os << r.n << ',' << a << ',' << b << '\n';
    }
}

}  // namespace netcert::io
