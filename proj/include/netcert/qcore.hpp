#pragma once

// Dense complex linear algebra and N-qubit states.
//
// Basis convention: node 1 is the most significant bit of a computational
// basis index, i.e. node k (1-based) of an n-qubit register lives at bit
// (n - k). All node arguments in this library are 1-based.

#include <Eigen/Dense>

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace netcert {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Mat2 = Eigen::Matrix2cd;

inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kNormTol = 1e-10;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kPsdTol = 1e-10;

namespace pauli {

inline Mat2 I() { return Mat2::Identity(); }

inline Mat2 X() {
    Mat2 m;
    m << 0, 1, 1, 0;
    return m;
}

inline Mat2 Y() {
    Mat2 m;
    m << 0, Complex(0, -1), Complex(0, 1), 0;
    return m;
}

inline Mat2 Z() {
    Mat2 m;
    m << 1, 0, 0, -1;
    return m;
}

inline Mat2 H() {
    Mat2 m;
    const double s = 1.0 / std::sqrt(2.0);
    m << s, s, s, -s;
    return m;
}

}  // namespace pauli

inline std::size_t dim_of(int n) { return std::size_t{1} << n; }

inline int qubits_of(Eigen::Index dim) {
    int n = 0;
    while ((Eigen::Index{1} << n) < dim) ++n;
    if ((Eigen::Index{1} << n) != dim) {
        throw std::invalid_argument("dimension " + std::to_string(dim) + " is not a power of two");
    }
    return n;
}

inline double hermiticity_error(const Matrix& m) {
    if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

inline bool is_hermitian(const Matrix& m, double tol = kHermitianTol) {
    return m.rows() == m.cols() && hermiticity_error(m) <= tol;
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

inline Matrix kron_all(const std::vector<Mat2>& factors) {
    Matrix out = Matrix::Identity(1, 1);
    for (const auto& f : factors) out = kron(out, Matrix(f));
    return out;
}

struct Eigensystem {
    Eigen::VectorXd values;  // ascending
    Matrix vectors;          // column i belongs to values[i]
};

/// Full diagonalization of a Hermitian matrix. Throws std::invalid_argument
/// when m deviates from its adjoint by more than kHermitianTol.
inline Eigensystem hermitian_eigs(const Matrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("hermitian_eigs: matrix is not square");
    const double err = hermiticity_error(m);
    if (!(err <= kHermitianTol)) {
        throw std::invalid_argument("hermitian_eigs: matrix is not Hermitian (max |M - M^dagger| = " +
                                    std::to_string(err) + ")");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
    if (solver.info() != Eigen::Success) throw std::runtime_error("hermitian_eigs: eigensolver did not converge");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

inline double max_eigenvalue(const Matrix& m) {
    if (m.rows() == 2) {
        // closed form for the 2x2 blocks that dominate the strategy searches
        const double a = m(0, 0).real();
        const double d = m(1, 1).real();
        const double half_gap = 0.5 * (a - d);
        return 0.5 * (a + d) + std::sqrt(half_gap * half_gap + std::norm(m(1, 0)));
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
    return solver.eigenvalues()(solver.eigenvalues().size() - 1);
}

/// A tensor product of single-qubit operators, factor i acting on node i + 1.
/// Products of diagonal/anti-diagonal factors (every Pauli and every
/// cos X + sin Y observable) are handled without materializing the matrix.
class LocalProduct {
public:
    explicit LocalProduct(std::vector<Mat2> factors) : factors_(std::move(factors)) {
        monomial_ = true;
        for (std::size_t k = 0; k < factors_.size(); ++k) {
            const auto& f = factors_[k];
            const bool diag = std::abs(f(0, 1)) == 0.0 && std::abs(f(1, 0)) == 0.0;
            const bool anti = std::abs(f(0, 0)) == 0.0 && std::abs(f(1, 1)) == 0.0;
            if (!diag && !anti) monomial_ = false;
            if (anti && !diag) flip_ |= std::uint64_t{1} << (factors_.size() - 1 - k);
        }
    }

    int num_qubits() const { return static_cast<int>(factors_.size()); }
    bool is_monomial() const { return monomial_; }
    const std::vector<Mat2>& factors() const { return factors_; }

    Matrix dense() const {
        if (!monomial_) return kron_all(factors_);
        const auto d = dim_of(num_qubits());
        Matrix out = Matrix::Zero(d, d);
        for (std::uint64_t c = 0; c < d; ++c) out(c ^ flip_, c) = column_value(c);
        return out;
    }

    Vector apply(const Vector& v) const {
        if (!monomial_) return kron_all(factors_) * v;
        Vector out = Vector::Zero(v.size());
        for (std::uint64_t c = 0; c < static_cast<std::uint64_t>(v.size()); ++c) {
            out(c ^ flip_) = column_value(c) * v(c);
        }
        return out;
    }

    /// <row| P |col>
    Complex element(std::uint64_t row, std::uint64_t col) const {
        const int n = num_qubits();
        Complex v = 1;
        for (int k = 0; k < n; ++k) {
            v *= factors_[k](static_cast<int>((row >> (n - 1 - k)) & 1U), static_cast<int>((col >> (n - 1 - k)) & 1U));
        }
        return v;
    }

    /// tr(rho * P)
    Complex trace_with(const Matrix& rho) const {
        if (!monomial_) return (rho * kron_all(factors_)).trace();
        Complex acc = 0;
        for (std::uint64_t c = 0; c < static_cast<std::uint64_t>(rho.rows()); ++c) {
            acc += rho(c, c ^ flip_) * column_value(c);
        }
        return acc;
    }

    /// acc += coeff * P
    void accumulate(Matrix& acc, Complex coeff) const {
        if (!monomial_) {
            acc += coeff * kron_all(factors_);
            return;
        }
        for (std::uint64_t c = 0; c < static_cast<std::uint64_t>(acc.rows()); ++c) {
            acc(c ^ flip_, c) += coeff * column_value(c);
        }
    }

private:
    Complex column_value(std::uint64_t c) const {
        const int n = num_qubits();
        Complex v = 1;
        for (int k = 0; k < n; ++k) {
            const int bit = static_cast<int>((c >> (n - 1 - k)) & 1U);
            const int row = bit ^ static_cast<int>((flip_ >> (n - 1 - k)) & 1U);
            v *= factors_[k](row, bit);
        }
        return v;
    }

    std::vector<Mat2> factors_;
    std::uint64_t flip_ = 0;
    bool monomial_ = true;
};

class StateVector {
public:
    StateVector(int n, Vector amplitudes) : n_(n), amps_(std::move(amplitudes)) {
        if (n < 1) throw std::invalid_argument("StateVector: need at least one qubit");
        if (static_cast<std::size_t>(amps_.size()) != dim_of(n)) {
            throw std::invalid_argument("StateVector: expected 2^n amplitudes");
        }
        if (std::abs(amps_.squaredNorm() - 1.0) > kNormTol) {
            throw std::invalid_argument("StateVector: amplitudes are not normalized");
        }
    }

    static StateVector normalized(int n, Vector amplitudes) {
        const double norm = amplitudes.norm();
        if (norm == 0.0) throw std::invalid_argument("StateVector: zero vector");
        return StateVector(n, amplitudes / norm);
    }

    int num_qubits() const { return n_; }
    const Vector& amplitudes() const { return amps_; }
    Complex operator[](std::size_t i) const { return amps_(static_cast<Eigen::Index>(i)); }
    Matrix projector() const { return amps_ * amps_.adjoint(); }

private:
    int n_;
    Vector amps_;
};

class DensityMatrix {
public:
    DensityMatrix(int n, Matrix m) : n_(n), m_(std::move(m)) {
        if (n < 1) throw std::invalid_argument("DensityMatrix: need at least one qubit");
        if (static_cast<std::size_t>(m_.rows()) != dim_of(n) || m_.rows() != m_.cols()) {
            throw std::invalid_argument("DensityMatrix: expected a 2^n x 2^n matrix");
        }
        if (!is_hermitian(m_)) throw std::invalid_argument("DensityMatrix: matrix is not Hermitian");
        if (std::abs(m_.trace().real() - 1.0) > kTraceTol) {
            throw std::invalid_argument("DensityMatrix: trace is not 1");
        }
        Eigen::SelfAdjointEigenSolver<Matrix> solver(m_, Eigen::EigenvaluesOnly);
        if (solver.eigenvalues()(0) < -kPsdTol) {
            throw std::invalid_argument("DensityMatrix: matrix has a negative eigenvalue");
        }
    }

    // the constructions below are valid by construction and skip the eigenvalue check
    static DensityMatrix pure(const StateVector& psi) { return {psi.num_qubits(), psi.projector(), Valid{}}; }

    static DensityMatrix maximally_mixed(int n) {
        const auto d = static_cast<Eigen::Index>(dim_of(n));
        return {n, Matrix::Identity(d, d) / static_cast<double>(d), Valid{}};
    }

    friend DensityMatrix white_noise_mix(const StateVector& psi, double p);

    int num_qubits() const { return n_; }
    const Matrix& matrix() const { return m_; }

private:
    struct Valid {};
    DensityMatrix(int n, Matrix m, Valid) : n_(n), m_(std::move(m)) {}

    int n_;
    Matrix m_;
};

inline StateVector ghz_state(int n) {
    if (n < 2) throw std::invalid_argument("ghz_state: n must be at least 2");
    Vector a = Vector::Zero(static_cast<Eigen::Index>(dim_of(n)));
    a(0) = a(a.size() - 1) = 1.0 / std::sqrt(2.0);
    return {n, a};
}

/// (|0>|+...+> + |1>|-...->)/sqrt(2) with node 1 as the center.
inline StateVector star_state(int n) {
    if (n < 2) throw std::invalid_argument("star_state: n must be at least 2");
    const auto d = dim_of(n);
    const double amp = std::pow(2.0, -0.5 * n);
    Vector a(static_cast<Eigen::Index>(d));
    const std::uint64_t half = d / 2;
    for (std::uint64_t i = 0; i < d; ++i) {
        if (i < half) {
            a(i) = amp;
        } else {
            // |-> factors contribute (-1)^(number of ones among the leaves)
            const int ones = std::popcount(i & (half - 1));
            a(i) = (ones % 2 == 0) ? amp : -amp;
        }
    }
    return {n, a};
}

/// Applies a single-qubit operator to node `node` (1-based) of an n-qubit vector.
inline Vector apply_local(const Vector& v, const Mat2& op, int node, int n) {
    if (node < 1 || node > n) throw std::invalid_argument("apply_local: node out of range");
    const std::uint64_t bit = std::uint64_t{1} << (n - node);
    Vector out = v;
    for (std::uint64_t i = 0; i < static_cast<std::uint64_t>(v.size()); ++i) {
        if (i & bit) continue;
        const Complex a0 = v(i), a1 = v(i | bit);
        out(i) = op(0, 0) * a0 + op(0, 1) * a1;
        out(i | bit) = op(1, 0) * a0 + op(1, 1) * a1;
    }
    return out;
}

inline DensityMatrix white_noise_mix(const StateVector& psi, double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("white_noise_mix: p must lie in [0, 1]");
    const int n = psi.num_qubits();
    const auto d = static_cast<Eigen::Index>(dim_of(n));
    Matrix m = (1.0 - p) * psi.projector() + (p / static_cast<double>(d)) * Matrix::Identity(d, d);
    return {n, std::move(m), DensityMatrix::Valid{}};
}

/// tr(rho |psi><psi|)
inline double fidelity(const DensityMatrix& rho, const StateVector& psi) {
    if (rho.num_qubits() != psi.num_qubits()) throw std::invalid_argument("fidelity: dimension mismatch");
    const auto& a = psi.amplitudes();
    return (a.adjoint() * rho.matrix() * a)(0, 0).real();
}

/// fidelity(white_noise_mix(psi, p), phi) without forming the 2^n x 2^n matrix.
inline double white_noise_fidelity(const StateVector& psi, double p, const StateVector& phi) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("white_noise_fidelity: p must lie in [0, 1]");
    if (psi.num_qubits() != phi.num_qubits()) throw std::invalid_argument("white_noise_fidelity: dimension mismatch");
    const double overlap = std::norm(phi.amplitudes().dot(psi.amplitudes()));
    return (1.0 - p) * overlap + p * phi.amplitudes().squaredNorm() / static_cast<double>(dim_of(psi.num_qubits()));
}

}  // namespace netcert
