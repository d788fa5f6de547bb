#ifndef MOYAL_CORE_OPS_HPP
#define MOYAL_CORE_OPS_HPP

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <stdexcept>
#include <utility>

namespace moyal {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using Vec2 = Eigen::Vector2d;

struct TruncationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct FormulaInapplicable : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UnsupportedPair : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Operator truncated to the first N levels of the number basis.
/// theta = lambda_p^2 throughout.
struct TruncatedOperator {
    Matrix entries;
    double lambda_p = 1.0;

    TruncatedOperator() = default;
    TruncatedOperator(Matrix m, double lp) : entries(std::move(m)), lambda_p(lp) {
        if (lambda_p <= 0.0) throw std::invalid_argument("lambda_p must be positive");
    }
    int dim() const { return static_cast<int>(entries.rows()); }
    TruncatedOperator adjoint() const { return {entries.adjoint(), lambda_p}; }
    bool is_hermitian(double tol = 1e-12) const;
};

struct ModelParams {
    double lambda_p = 1.0;
    int truncation = 32;
    double tol = 1e-8;

    void validate() const {
        if (lambda_p <= 0.0) throw std::invalid_argument("lambda_p must be positive");
        if (truncation < 4) throw std::invalid_argument("truncation must be >= 4");
        if (tol <= 0.0 || tol >= 1.0) throw std::invalid_argument("tol must be in (0,1)");
    }
};

/// Annihilation / creation pair: a[m, m+1] = lambda_p sqrt(m+1).
/// [a, a^+] = lambda_p^2 I except the last diagonal entry.
std::pair<TruncatedOperator, TruncatedOperator> ladder(int n, double lambda_p);

/// q1 = (a + a^+)/sqrt2, q2 = (a - a^+)/(i sqrt2); [q1, q2] = i lambda_p^2 on the interior.
std::pair<TruncatedOperator, TruncatedOperator> position_ops(int n, double lambda_p);

/// H = a^+ a + lambda_p^2/2, spectrum E_m = lambda_p^2 (m + 1/2).
TruncatedOperator hamiltonian(int n, double lambda_p);

/// Translation unitary U(kappa) = exp((kc a^+ - conj(kc) a)/lambda_p^2), kc = (k1 + i k2)/sqrt2.
/// Throws TruncationError when the covariance residual on the leading 3/4 block exceeds tol.
TruncatedOperator displacement(const Vec2& kappa, int n, double lambda_p, double tol = 1e-8);

/// V f(Lambda) V^+ for Hermitian input.
TruncatedOperator hermitian_function(const TruncatedOperator& op,
                                     const std::function<double(double)>& f);

/// Largest singular value via Hermitian eigensolve of A^+ A.
double operator_norm(const TruncatedOperator& op);
double operator_norm(const Matrix& m);

TruncatedOperator commutator(const TruncatedOperator& x, const TruncatedOperator& y);

/// d/dz as the number-basis commutator [A, a^+]/lambda_p^2.
TruncatedOperator deriv_z(const TruncatedOperator& op);
/// d/dzbar = -[A, a]/lambda_p^2; sign fixed so deriv_zbar(A^+) = deriv_z(A)^+.
TruncatedOperator deriv_zbar(const TruncatedOperator& op);

}  // namespace moyal

#endif
