#ifndef MOYAL_TENSOR_SPACE_HPP
#define MOYAL_TENSOR_SPACE_HPP

#include "moyal/core_ops.hpp"
#include "moyal/states.hpp"

#include <vector>

namespace moyal {

/// Operator on the two-point space H (x) H; index map (i,j) <-> i*N + j.
struct TwoPointOperator {
    Matrix entries;
    double lambda_p = 1.0;
    int base_dim = 0;

    TwoPointOperator() = default;
    TwoPointOperator(Matrix m, double lp, int n) : entries(std::move(m)), lambda_p(lp), base_dim(n) {}
    int dim() const { return static_cast<int>(entries.rows()); }
};

/// dA = A (x) I - I (x) A.
TwoPointOperator universal_diff(const TruncatedOperator& op);

/// L^2 = (dq1)^2 + (dq2)^2, dense on H (x) H.
TwoPointOperator length_sq(int n, double lambda_p);

/// Ladder-form of L^2: 2(H(x)I + I(x)H - a(x)a^+ - a^+(x)a).  Equal to length_sq on the
/// interior block i+j <= N-2; the last total-number sectors differ by finite-section edge terms.
TwoPointOperator length_sq_ladder_form(int n, double lambda_p);

/// L = sqrt(L^2), eigenvalues clipped at 0 before the root.
TwoPointOperator length(int n, double lambda_p);

// L^2 conserves the total number s = i+j, so it splits into real tridiagonal blocks.
// Sectors s <= N-2 are free of truncation edge effects.
struct LengthSector {
    int s = 0;       // total number
    int i_lo = 0;    // first left-factor index of the block
    Eigen::MatrixXd block;
};
std::vector<LengthSector> length_sq_sectors(int n, double lambda_p);

struct SpectrumRow {
    int level = 0;
    double analytic = 0;      // lambda_p sqrt(4m+2)
    double numeric = 0;
    int multiplicity = 0;     // finite-truncation count (grows with N)
    bool reliable = true;
};

/// Lowest distinct eigenvalues of L, from the truncation-faithful sectors (i+j <= N-2).
std::vector<SpectrumRow> spectrum_L(int n, double lambda_p, int levels);

/// Orthonormal basis of ker(da) on total-number sectors s <= N-2; one vector per sector,
/// coefficients sqrt(binomial(s,k)/2^s) along the antidiagonal.  Vectors have length N^2.
std::vector<CVector> ground_kernel(int n, double lambda_p);

/// Number of singular values of the N x N coefficient matrix above tol.
int schmidt_rank(const CVector& two_point_vec, int n, double tol = 1e-10);

/// Standard deviation sqrt(phi(A^2) - phi(A)^2).
double uncertainty(const StateSpec& spec, const TruncatedOperator& op);

// Matrix-free separable-state expectations of L^2 and L at truncation n.  Same operator as the
// dense objects, evaluated through the factored/sector structure so large n stays cheap.
double pair_expect_length_sq(const StateSpec& s1, const StateSpec& s2, int n, double lambda_p);
double pair_expect_length(const StateSpec& s1, const StateSpec& s2, int n, double lambda_p);

std::string spectrum_csv(const std::vector<SpectrumRow>& rows, int n);

}  // namespace moyal

#endif
