#ifndef MOYAL_LIPSCHITZ_SOLVER_HPP
#define MOYAL_LIPSCHITZ_SOLVER_HPP

#include "moyal/quantum_length.hpp"
#include "moyal/states.hpp"

#include <tuple>
#include <vector>

namespace moyal {

enum class SolverMethod { Auto, DiagonalLP, ProjectedAscent };

struct SolverConfig {
    std::vector<int> schedule;      // strictly increasing truncations; default {24, 32}
    double tol = 1e-8;
    int max_iters = 4000;           // sharp-polish iteration cap
    int smooth_iters = 300;         // iterations per smoothing stage
    SolverMethod method = SolverMethod::Auto;
    double step0 = 0.5;

    void validate() const;
};

struct SolverTrace {
    std::vector<std::pair<int, double>> per_truncation;
    std::vector<double> objective;  // sharp-polish history at the last truncation
};

/// Lipschitz seminorm (sqrt2/lambda_p^2) max(||[A,a^+]||, ||[A,a]||); the last row and column
/// of each commutator are dropped, finite sections misrepresent the norm there.
double seminorm(const TruncatedOperator& op);

/// sup { phi1(A) - phi2(A) : seminorm(A) <= 1 } over Hermitian A at scheduled truncations.
DistanceReport solve_distance(const StateSpec& s1, const StateSpec& s2, const SolverConfig& config,
                              double lambda_p, SolverTrace* trace = nullptr);

/// Diagonal optimal element between eigenstates: d_k = (lambda_p/sqrt2) sum_{j<=k} 1/sqrt(j).
TruncatedOperator optimal_element_l0(int n, double lambda_p);

/// The three length-generating diagonals l1, l2, l3 evaluated at z = a.
std::tuple<TruncatedOperator, TruncatedOperator, TruncatedOperator> candidate_elements(
    int n, double lambda_p);

/// Entrywise-relative residual of M (a a^+) M^+ = (1/2) a^+ a with M = deriv_z(A),
/// on the interior block; 0 exactly for the geodesic solution l0, order one otherwise.
double geodesic_residual(const TruncatedOperator& op);

struct RiemannComparison {
    double sum = 0.0;       // d_D as a discrete sum of the line element
    double integral = 0.0;  // d'_L as its middle Riemann integral
    double ratio = 0.0;
};
RiemannComparison riemann_comparison(int m, int n, double lambda_p);

}  // namespace moyal

#endif
