#include "gen.hpp"
#include "netcert/hybrid.hpp"
#include "netcert/protocol.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace netcert;

namespace {

DensityMatrix phi_plus() { return DensityMatrix::pure(ghz_state(2)); }

Matrix dense2(const Mat2& a, const Mat2& b) { return kron(Matrix(a), Matrix(b)); }

std::vector<int> all_plus(int len) { return std::vector<int>(static_cast<std::size_t>(len), 1); }

double top(const Matrix& m) { return hermitian_eigs(m).values.maxCoeff(); }

std::vector<ClassicalAssignment> random_classical(std::mt19937_64& rng, int n, int n_c, int len) {
    std::vector<int> nodes(n);
    for (int k = 0; k < n; ++k) nodes[k] = k + 1;
    std::shuffle(nodes.begin(), nodes.end(), rng);
    std::vector<ClassicalAssignment> out;
    for (int i = 0; i < n_c; ++i) out.push_back({nodes[i], gen::random_signs(rng, len)});
    return out;
}

}  // namespace

TEST(HybridExpectation, Examples) {
    const auto d = ghz_decomposition(3);
    const HybridNetwork h(3, {{3, all_plus(4)}}, phi_plus());
    EXPECT_NEAR(hybrid_expectation(h, d, {4, 4, 4}), 1.0, 1e-12);
    EXPECT_NEAR(hybrid_expectation(h, d, {0, 0, 0}), 1.0, 1e-12);

    const HybridNetwork flipped(3, {{2, {-1, -1, -1, -1}}}, phi_plus());
    const double zz = (phi_plus().matrix() * dense2(pauli::Z(), pauli::Z())).trace().real();
    EXPECT_NEAR(hybrid_expectation(flipped, d, {4, 4, 4}), -zz, 1e-12);
    EXPECT_NEAR(hybrid_expectation(flipped, d, {4, 0, 4}), zz, 1e-12);  // identity on the classical node
}

TEST(HybridFidelity, MaximallyMixedQuantumPartKeepsOnlyClassicalOnlyTerms) {
    std::mt19937_64 rng(17);
    for (int n_c = 1; n_c <= 2; ++n_c) {
        const auto d = ghz_decomposition(3);
        for (int trial = 0; trial < 8; ++trial) {
            const auto cl = random_classical(rng, 3, n_c, 4);
            const HybridNetwork h(3, cl, DensityMatrix::maximally_mixed(3 - n_c));
            // oracle: sum of coeff * classical product over terms that are the identity on V_Q
            double want = 0;
            for (const auto& t : d.terms()) {
                bool quantum_identity = true;
                for (int k : h.quantum_nodes()) quantum_identity = quantum_identity && t.setting[k - 1] == 0;
                if (!quantum_identity) continue;
                int f = 1;
                for (const auto& c : cl) f *= t.setting[c.node - 1] == 0 ? 1 : c.outcomes[t.setting[c.node - 1] - 1];
                want += t.coeff * f;
            }
            EXPECT_NEAR(hybrid_fidelity(h, d), want, 1e-12);
        }
    }
}

TEST(HybridOperator, ThreeNodeOneClassicalMatchesDisplay) {
    const int n = 3;
    const auto d = ghz_decomposition(n);
    const Matrix op = hybrid_operator(d, {{3, all_plus(4)}});
    Matrix want = (dense2(pauli::I(), pauli::I()) + dense2(pauli::I(), pauli::Z()) + dense2(pauli::Z(), pauli::Z()) +
                   dense2(pauli::Z(), pauli::I())) / 8.0;
    for (int j = 1; j <= 3; ++j) {
        const Mat2 r = ghz_observable(n, j).matrix();
        want += (j % 2 ? -1.0 : 1.0) / 6.0 * dense2(r, r);
    }
    EXPECT_LT((op - want).norm(), 1e-12);
    EXPECT_NEAR(top(op), 2.0 / 3, 1e-9);
    EXPECT_NEAR(top(op), 0.667, 5e-4);
}

TEST(HybridOperator, FourNodeTwoClassicalMatchesPauliDisplay) {
    const auto d = ghz_decomposition(4);
    const std::vector<ClassicalAssignment> cl = {{3, {1, -1, -1, 1, 1}}, {4, all_plus(5)}};
    const Matrix op = hybrid_operator(d, cl);
    const Mat2 I = pauli::I(), X = pauli::X(), Y = pauli::Y(), Z = pauli::Z();
    const Matrix want = (dense2(I, I) + dense2(I, Z) + dense2(Z, Z) + dense2(Z, I) + dense2(X, X) - dense2(Y, Y) -
                         dense2(Y, X) - dense2(X, Y)) / 8.0;
    EXPECT_LT((op - want).norm(), 1e-12);
    EXPECT_NEAR(top(op), (1 + std::sqrt(3.0)) / 4, 1e-9);
    EXPECT_NEAR(top(op), 0.683, 5e-4);

    // the same operator from the 3-node Pauli protocol with node 3 classical (all +1)
    const Matrix p = hybrid_operator(pauli_decomposition(3), {{3, all_plus(3)}});
    EXPECT_LT((p - want).norm(), 1e-12);
}

TEST(HybridOperator, TraceIdentityOnRandomHybrids) {
    std::mt19937_64 rng(33);
    for (auto kind : {ProtocolKind::GhzXY, ProtocolKind::StarXY, ProtocolKind::Pauli}) {
        for (int n = 3; n <= 5; ++n) {
            const auto d = make_decomposition(kind, n);
            for (int trial = 0; trial < 4; ++trial) {
                const int n_c = 1 + trial % (n - 1);
                const auto cl = random_classical(rng, n, n_c, d.outcomes_per_node());
                const auto rho = gen::random_density(rng, n - n_c);
                const HybridNetwork h(n, cl, rho);
                const double via_op = (rho.matrix() * hybrid_operator(d, cl)).trace().real();
                EXPECT_NEAR(hybrid_fidelity(h, d), via_op, 1e-12);
                EXPECT_TRUE(is_hermitian(hybrid_operator(d, cl), 1e-12));
            }
        }
    }
}

TEST(HybridOperator, FlippingXYTableFlipsXYContributions) {
    std::mt19937_64 rng(41);
    for (int n = 3; n <= 5; ++n) {
        const auto d = ghz_decomposition(n);
        for (int trial = 0; trial < 4; ++trial) {
            const int n_c = 1 + trial % (n - 1);
            auto cl = random_classical(rng, n, n_c, n + 1);
            const HybridNetwork h(n, cl, gen::random_density(rng, n - n_c));
            auto flipped = cl;
            for (int m = 0; m < n; ++m) flipped[0].outcomes[m] = -flipped[0].outcomes[m];
            const HybridNetwork hf(n, flipped, h.quantum_state());
            for (const auto& t : d.terms()) {
                const int m = t.setting[cl[0].node - 1];
                const bool xy = m >= 1 && m <= n;
                EXPECT_NEAR(hybrid_expectation(hf, d, t.setting), (xy ? -1 : 1) * hybrid_expectation(h, d, t.setting),
                            1e-12);
            }
        }
    }
}

TEST(HybridOperator, SpectrumInvariantUnderRelabelingClassicalNodes) {
    std::mt19937_64 rng(8);
    for (int n = 3; n <= 5; ++n) {
        const auto d = ghz_decomposition(n);
        for (int n_c = 1; n_c < n; ++n_c) {
            auto cl = random_classical(rng, n, n_c, n + 1);
            const auto base = hermitian_eigs(hybrid_operator(d, cl)).values;
            auto moved = cl;
            std::vector<int> nodes(n);
            for (int k = 0; k < n; ++k) nodes[k] = k + 1;
            std::shuffle(nodes.begin(), nodes.end(), rng);
            for (int i = 0; i < n_c; ++i) moved[i].node = nodes[i];
            const auto other = hermitian_eigs(hybrid_operator(d, moved)).values;
            EXPECT_LT((base - other).norm(), 1e-9) << "n=" << n << " n_c=" << n_c;
        }
    }
}

TEST(HybridNetwork, RejectsInvalidClassicalSets) {
    EXPECT_THROW(HybridNetwork(3, {}, DensityMatrix::maximally_mixed(3)), std::invalid_argument);
    EXPECT_THROW(HybridNetwork(2, {{1, all_plus(3)}, {2, all_plus(3)}}, DensityMatrix::maximally_mixed(1)),
                 std::invalid_argument);
    EXPECT_THROW(HybridNetwork(3, {{1, all_plus(4)}, {1, all_plus(4)}}, DensityMatrix::maximally_mixed(1)),
                 std::invalid_argument);
    EXPECT_THROW(HybridNetwork(3, {{4, all_plus(4)}}, DensityMatrix::maximally_mixed(2)), std::invalid_argument);
    EXPECT_THROW(HybridNetwork(3, {{1, {1, 0, 1, 1}}}, DensityMatrix::maximally_mixed(2)), std::invalid_argument);
    EXPECT_THROW(HybridNetwork(3, {{1, all_plus(4)}}, DensityMatrix::maximally_mixed(1)), std::invalid_argument);
}

TEST(HybridNetwork, TableLengthMustMatchProtocol) {
    const HybridNetwork h(3, {{1, all_plus(4)}}, phi_plus());
    EXPECT_NO_THROW(hybrid_fidelity(h, ghz_decomposition(3)));
    EXPECT_THROW(hybrid_fidelity(h, pauli_decomposition(3)), std::invalid_argument);
}
