#include "moyal/core_ops.hpp"

#include <cmath>

namespace moyal {

bool TruncatedOperator::is_hermitian(double tol) const {
    double scale = entries.cwiseAbs().maxCoeff();
    double dev = (entries - entries.adjoint()).cwiseAbs().maxCoeff();
    return dev <= tol * std::max(1.0, scale);
}

std::pair<TruncatedOperator, TruncatedOperator> ladder(int n, double lambda_p) {
    if (n < 2) throw std::invalid_argument("ladder: truncation must be >= 2");
    if (lambda_p <= 0.0) throw std::invalid_argument("ladder: lambda_p must be positive");
    Matrix a = Matrix::Zero(n, n);
    for (int m = 0; m + 1 < n; ++m) a(m, m + 1) = lambda_p * std::sqrt(double(m + 1));
    return {TruncatedOperator{a, lambda_p}, TruncatedOperator{a.adjoint(), lambda_p}};
}

std::pair<TruncatedOperator, TruncatedOperator> position_ops(int n, double lambda_p) {
    auto [a, ad] = ladder(n, lambda_p);
    const double s = 1.0 / std::sqrt(2.0);
    Matrix q1 = s * (a.entries + ad.entries);
    Matrix q2 = s * (a.entries - ad.entries) / Complex(0.0, 1.0);
    return {TruncatedOperator{q1, lambda_p}, TruncatedOperator{q2, lambda_p}};
}

TruncatedOperator hamiltonian(int n, double lambda_p) {
    if (n < 2) throw std::invalid_argument("hamiltonian: truncation must be >= 2");
    Matrix h = Matrix::Zero(n, n);
    for (int m = 0; m < n; ++m) h(m, m) = lambda_p * lambda_p * (m + 0.5);
    return {h, lambda_p};
}

TruncatedOperator displacement(const Vec2& kappa, int n, double lambda_p, double tol) {
    auto [a, ad] = ladder(n, lambda_p);
    const Complex kc(kappa(0) / std::sqrt(2.0), kappa(1) / std::sqrt(2.0));
    Matrix gen = (kc * ad.entries - std::conj(kc) * a.entries) / (lambda_p * lambda_p);
    // gen is anti-Hermitian; exponentiate through the Hermitian matrix i*gen
    Eigen::SelfAdjointEigenSolver<Matrix> es(Complex(0, 1) * gen);
    Matrix u = es.eigenvectors() *
               (Complex(0, -1) * es.eigenvalues().array()).exp().matrix().asDiagonal() *
               es.eigenvectors().adjoint();
    if (kappa.norm() > 0.0) {
        // covariance residual U^+ q U - q - kappa on the low-index columns; high columns see
        // edge reflection of order one no matter how large n is
        auto [q1, q2] = position_ops(n, lambda_p);
        int cols = std::max(2, n / 8);
        Matrix d1 = u.adjoint() * q1.entries * u - q1.entries;
        d1.diagonal().array() -= kappa(0);
        Matrix d2 = u.adjoint() * q2.entries * u - q2.entries;
        d2.diagonal().array() -= kappa(1);
        double res = std::max(operator_norm(Matrix(d1.leftCols(cols))),
                              operator_norm(Matrix(d2.leftCols(cols))));
        if (res > tol)
            throw TruncationError("displacement: truncation too small for |kappa| (residual " +
                                  std::to_string(res) + ")");
    }
    return {u, lambda_p};
}

TruncatedOperator hermitian_function(const TruncatedOperator& op,
                                     const std::function<double(double)>& f) {
    if (!op.is_hermitian(1e-10))
        throw std::invalid_argument("hermitian_function: input is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Matrix> es(op.entries);
    RVector vals = es.eigenvalues();
    for (int i = 0; i < vals.size(); ++i) vals(i) = f(vals(i));
    Matrix out = es.eigenvectors() * vals.asDiagonal() * es.eigenvectors().adjoint();
    return {(out + out.adjoint()) / 2.0, op.lambda_p};
}

double operator_norm(const Matrix& m) {
    if (m.rows() == 0 || m.cols() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<Matrix> es(m.adjoint() * m, Eigen::EigenvaluesOnly);
    double top = es.eigenvalues().maxCoeff();
    return std::sqrt(std::max(0.0, top));
}

double operator_norm(const TruncatedOperator& op) { return operator_norm(op.entries); }

TruncatedOperator commutator(const TruncatedOperator& x, const TruncatedOperator& y) {
    return {x.entries * y.entries - y.entries * x.entries, x.lambda_p};
}

TruncatedOperator deriv_z(const TruncatedOperator& op) {
    auto [a, ad] = ladder(op.dim(), op.lambda_p);
    Matrix c = op.entries * ad.entries - ad.entries * op.entries;
    return {c / (op.lambda_p * op.lambda_p), op.lambda_p};
}

TruncatedOperator deriv_zbar(const TruncatedOperator& op) {
    auto [a, ad] = ladder(op.dim(), op.lambda_p);
    Matrix c = op.entries * a.entries - a.entries * op.entries;
    return {-c / (op.lambda_p * op.lambda_p), op.lambda_p};
}

}  // namespace moyal
