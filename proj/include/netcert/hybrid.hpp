#pragma once

// Quantum-classical hybrid networks: some nodes answer every setting from a
// fixed +-1 table, the rest share a quantum state.

#include "netcert/protocol.hpp"
#include "netcert/qcore.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

namespace netcert {

/// Pre-existing outcomes of a classical node; outcomes[m - 1] answers setting index m.
struct ClassicalAssignment {
    int node;
    std::vector<int> outcomes;

    int outcome(int m) const { return m == 0 ? 1 : outcomes.at(static_cast<std::size_t>(m - 1)); }

    friend bool operator==(const ClassicalAssignment&, const ClassicalAssignment&) = default;
};

namespace detail {

inline std::vector<ClassicalAssignment> checked_classical(int n, std::vector<ClassicalAssignment> classical) {
    const int nc = static_cast<int>(classical.size());
    if (nc < 1 || nc > n - 1) {
        throw std::invalid_argument("hybrid network needs between 1 and n-1 classical nodes, got " +
                                    std::to_string(nc));
    }
    std::sort(classical.begin(), classical.end(), [](const auto& a, const auto& b) { return a.node < b.node; });
    for (std::size_t i = 0; i < classical.size(); ++i) {
        const auto& c = classical[i];
        if (c.node < 1 || c.node > n) throw std::invalid_argument("classical node index out of range");
        if (i > 0 && classical[i - 1].node == c.node) throw std::invalid_argument("classical node listed twice");
        if (c.outcomes.empty()) throw std::invalid_argument("classical node has an empty outcome table");
        for (int v : c.outcomes) {
            if (v != 1 && v != -1) throw std::invalid_argument("classical outcomes must be +1 or -1");
        }
    }
    return classical;
}

inline std::vector<int> complement_nodes(int n, const std::vector<ClassicalAssignment>& classical) {
    std::vector<int> q;
    std::size_t ci = 0;
    for (int k = 1; k <= n; ++k) {
        if (ci < classical.size() && classical[ci].node == k) {
            ++ci;
        } else {
            q.push_back(k);
        }
    }
    return q;
}

inline void check_table_lengths(const Decomposition& d, const std::vector<ClassicalAssignment>& classical) {
    for (const auto& c : classical) {
        if (static_cast<int>(c.outcomes.size()) != d.outcomes_per_node()) {
            throw std::invalid_argument("classical node " + std::to_string(c.node) + " has " +
                                        std::to_string(c.outcomes.size()) + " outcomes, protocol needs " +
                                        std::to_string(d.outcomes_per_node()));
        }
    }
}

}  // namespace detail

class HybridNetwork {
public:
    HybridNetwork(int n, std::vector<ClassicalAssignment> classical, DensityMatrix quantum_state)
        : n_(n),
          classical_(detail::checked_classical(n, std::move(classical))),
          quantum_nodes_(detail::complement_nodes(n, classical_)),
          state_(std::move(quantum_state)) {
        if (state_.num_qubits() != static_cast<int>(quantum_nodes_.size())) {
            throw std::invalid_argument("hybrid quantum state must act on exactly the " +
                                        std::to_string(quantum_nodes_.size()) + " quantum nodes");
        }
    }

    int num_nodes() const { return n_; }
    const std::vector<ClassicalAssignment>& classical() const { return classical_; }
    const std::vector<int>& quantum_nodes() const { return quantum_nodes_; }
    const DensityMatrix& quantum_state() const { return state_; }

    std::vector<int> classical_nodes() const {
        std::vector<int> out;
        for (const auto& c : classical_) out.push_back(c.node);
        return out;
    }

    const ClassicalAssignment* assignment_for(int node) const {
        for (const auto& c : classical_) {
            if (c.node == node) return &c;
        }
        return nullptr;
    }

private:
    int n_;
    std::vector<ClassicalAssignment> classical_;
    std::vector<int> quantum_nodes_;
    DensityMatrix state_;
};

/// Product of the classical nodes' fixed outcomes for a setting; identity entries contribute 1.
inline int classical_factor(const std::vector<ClassicalAssignment>& classical, const Setting& s) {
    int f = 1;
    for (const auto& c : classical) f *= c.outcome(s[c.node - 1]);
    return f;
}

/// <tensor_{V_Q} R> * prod_{V_c} R for one setting vector.
inline double hybrid_expectation(const HybridNetwork& h, const Decomposition& d, const Setting& s) {
    d.validate_setting(s);
    detail::check_table_lengths(d, h.classical());
    const Complex q = d.operator_on(s, h.quantum_nodes()).trace_with(h.quantum_state().matrix());
    return q.real() * classical_factor(h.classical(), s);
}

/// Fidelity operator on the quantum nodes for fixed classical tables; its
/// expectation under any quantum state is the hybrid fidelity.
inline Matrix hybrid_operator(const Decomposition& d, std::vector<ClassicalAssignment> classical) {
    const int n = d.num_qubits();
    classical = detail::checked_classical(n, std::move(classical));
    detail::check_table_lengths(d, classical);
    const auto quantum = detail::complement_nodes(n, classical);
    const auto dim = static_cast<Eigen::Index>(dim_of(static_cast<int>(quantum.size())));
    Matrix acc = Matrix::Zero(dim, dim);
    for (const auto& t : d.terms()) {
        const int f = classical_factor(classical, t.setting);
        d.operator_on(t.setting, quantum).accumulate(acc, t.coeff * f);
    }
    return acc;
}

inline double hybrid_fidelity(const HybridNetwork& h, const Decomposition& d) {
    if (h.num_nodes() != d.num_qubits()) throw std::invalid_argument("hybrid_fidelity: node count mismatch");
    double f = 0.0;
    for (const auto& t : d.terms()) f += t.coeff * hybrid_expectation(h, d, t.setting);
    return f;
}

}  // namespace netcert
