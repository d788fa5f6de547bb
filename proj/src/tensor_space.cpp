#include "moyal/tensor_space.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace moyal {

namespace {

Matrix kron(const Matrix& x, const Matrix& y) {
    const int nx = static_cast<int>(x.rows()), ny = static_cast<int>(y.rows());
    Matrix out(nx * ny, nx * ny);
    for (int i = 0; i < nx; ++i)
        for (int k = 0; k < nx; ++k) out.block(i * ny, k * ny, ny, ny) = x(i, k) * y;
    return out;
}

}  // namespace

TwoPointOperator universal_diff(const TruncatedOperator& op) {
    const int n = op.dim();
    Matrix eye = Matrix::Identity(n, n);
    return {kron(op.entries, eye) - kron(eye, op.entries), op.lambda_p, n};
}

TwoPointOperator length_sq(int n, double lambda_p) {
    if (n < 2) throw std::invalid_argument("length_sq: truncation must be >= 2");
    auto [q1, q2] = position_ops(n, lambda_p);
    TwoPointOperator d1 = universal_diff(q1);
    TwoPointOperator d2 = universal_diff(q2);
    Matrix l2 = d1.entries * d1.entries + d2.entries * d2.entries;
    return {(l2 + l2.adjoint()) / 2.0, lambda_p, n};
}

TwoPointOperator length_sq_ladder_form(int n, double lambda_p) {
    auto [a, ad] = ladder(n, lambda_p);
    Matrix h = hamiltonian(n, lambda_p).entries;
    Matrix eye = Matrix::Identity(n, n);
    Matrix l2 = 2.0 * (kron(h, eye) + kron(eye, h) - kron(a.entries, ad.entries) -
                       kron(ad.entries, a.entries));
    return {l2, lambda_p, n};
}

std::vector<LengthSector> length_sq_sectors(int n, double lambda_p) {
    const double t = lambda_p * lambda_p;
    std::vector<LengthSector> out;
    out.reserve(2 * n - 1);
    for (int s = 0; s <= 2 * n - 2; ++s) {
        int i_lo = std::max(0, s - (n - 1));
        int i_hi = std::min(s, n - 1);
        int dim = i_hi - i_lo + 1;
        Eigen::MatrixXd b = Eigen::MatrixXd::Zero(dim, dim);
        for (int ii = 0; ii < dim; ++ii) {
            int i = i_lo + ii, j = s - i;
            double di = (i <= n - 2) ? (2.0 * i + 1.0) : double(n - 1);
            double dj = (j <= n - 2) ? (2.0 * j + 1.0) : double(n - 1);
            b(ii, ii) = t * (di + dj);
            if (ii > 0 && j + 1 <= n - 1) {
                double c = -2.0 * t * std::sqrt(double(i) * double(j + 1));
                b(ii, ii - 1) = c;
                b(ii - 1, ii) = c;
            }
        }
        out.push_back({s, i_lo, std::move(b)});
    }
    return out;
}

TwoPointOperator length(int n, double lambda_p) {
    auto sectors = length_sq_sectors(n, lambda_p);
    Matrix l = Matrix::Zero(n * n, n * n);
    for (const auto& sec : sectors) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sec.block);
        Eigen::VectorXd vals = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
        Eigen::MatrixXd blk = es.eigenvectors() * vals.asDiagonal() * es.eigenvectors().transpose();
        const int dim = static_cast<int>(sec.block.rows());
        for (int ii = 0; ii < dim; ++ii) {
            int pi = (sec.i_lo + ii) * n + (sec.s - sec.i_lo - ii);
            for (int jj = 0; jj < dim; ++jj) {
                int pj = (sec.i_lo + jj) * n + (sec.s - sec.i_lo - jj);
                l(pi, pj) = blk(ii, jj);
            }
        }
    }
    return {l, lambda_p, n};
}

std::vector<SpectrumRow> spectrum_L(int n, double lambda_p, int levels) {
    if (levels < 0) throw std::invalid_argument("spectrum_L: levels must be >= 0");
    std::vector<SpectrumRow> rows;
    if (levels == 0) return rows;
    auto sectors = length_sq_sectors(n, lambda_p);
    std::vector<double> evs;
    for (const auto& sec : sectors) {
        if (sec.s > n - 2) continue;  // edge sectors carry finite-section artifacts
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sec.block, Eigen::EigenvaluesOnly);
        for (int i = 0; i < es.eigenvalues().size(); ++i)
            evs.push_back(std::sqrt(std::max(0.0, es.eigenvalues()(i))));
    }
    std::sort(evs.begin(), evs.end());
    const double cluster = 1e-8 * lambda_p * std::sqrt(double(n));
    size_t pos = 0;
    for (int m = 0; m < levels && pos < evs.size(); ++m) {
        double v = evs[pos];
        int mult = 0;
        double sum = 0;
        while (pos < evs.size() && evs[pos] - v <= cluster) {
            sum += evs[pos];
            ++mult;
            ++pos;
        }
        SpectrumRow row;
        row.level = m;
        row.analytic = lambda_p * std::sqrt(4.0 * m + 2.0);
        row.numeric = sum / mult;
        row.multiplicity = mult;
        row.reliable = (m <= n / 2);
        rows.push_back(row);
    }
    return rows;
}

std::vector<CVector> ground_kernel(int n, double lambda_p) {
    (void)lambda_p;  // kernel coefficients are scale free
    if (n < 3) throw std::invalid_argument("ground_kernel: truncation must be >= 3");
    std::vector<CVector> out;
    for (int s = 0; s <= n - 2; ++s) {
        CVector v = CVector::Zero(n * n);
        // alpha_k = sqrt(C(s,k)/2^s) on |k, s-k>, from the da-recursion
        double log2s = s * std::log(2.0);
        for (int k = 0; k <= s; ++k) {
            double logc = std::lgamma(s + 1.0) - std::lgamma(k + 1.0) - std::lgamma(s - k + 1.0);
            v(k * n + (s - k)) = std::exp(0.5 * (logc - log2s));
        }
        out.push_back(std::move(v));
    }
    return out;
}

int schmidt_rank(const CVector& two_point_vec, int n, double tol) {
    if (two_point_vec.size() != static_cast<long>(n) * n)
        throw std::invalid_argument("schmidt_rank: vector length must be n^2");
    Matrix c(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) c(i, j) = two_point_vec(i * n + j);
    Eigen::JacobiSVD<Matrix> svd(c);
    int rank = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > tol) ++rank;
    return rank;
}

double uncertainty(const StateSpec& spec, const TruncatedOperator& op) {
    CVector psi = realize(spec, op.dim(), op.lambda_p);
    CVector apsi = op.entries * psi;
    double mean_sq = std::real(apsi.dot(apsi));  // <A psi, A psi> = phi(A^2) for Hermitian A
    double mean = std::real(psi.dot(apsi));
    return std::sqrt(std::max(0.0, mean_sq - mean * mean));
}

double pair_expect_length_sq(const StateSpec& s1, const StateSpec& s2, int n, double lambda_p) {
    CVector p1 = realize(s1, n, lambda_p);
    CVector p2 = realize(s2, n, lambda_p);
    auto [a, ad] = ladder(n, lambda_p);
    Matrix h = hamiltonian(n, lambda_p).entries;
    Complex h1 = p1.dot(h * p1), h2 = p2.dot(h * p2);
    Complex a1 = p1.dot(a.entries * p1), a2 = p2.dot(a.entries * p2);
    return std::real(2.0 * (h1 + h2) - 2.0 * (a1 * std::conj(a2) + std::conj(a1) * a2));
}

double pair_expect_length(const StateSpec& s1, const StateSpec& s2, int n, double lambda_p) {
    CVector p1 = realize(s1, n, lambda_p);
    CVector p2 = realize(s2, n, lambda_p);
    auto sectors = length_sq_sectors(n, lambda_p);
    double total = 0.0;
    for (const auto& sec : sectors) {
        const int dim = static_cast<int>(sec.block.rows());
        CVector comp(dim);
        for (int ii = 0; ii < dim; ++ii) {
            int i = sec.i_lo + ii, j = sec.s - i;
            comp(ii) = p1(i) * p2(j);
        }
        if (comp.norm() < 1e-300) continue;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sec.block);
        Eigen::VectorXd vals = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
        CVector w = es.eigenvectors().transpose().cast<Complex>() * comp;
        for (int ii = 0; ii < dim; ++ii) total += vals(ii) * std::norm(w(ii));
    }
    return total;
}

std::string spectrum_csv(const std::vector<SpectrumRow>& rows, int n) {
    std::string out = "level,analytic,numeric,multiplicity,gap,truncation,reliable\n";
    char buf[256];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%d,%.12g,%.12g,%d,%.12g,%d,%d\n", r.level, r.analytic,
                      r.numeric, r.multiplicity, std::abs(r.numeric - r.analytic), n,
                      r.reliable ? 1 : 0);
        out += buf;
    }
    return out;
}

}  // namespace moyal
