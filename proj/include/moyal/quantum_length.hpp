#ifndef MOYAL_QUANTUM_LENGTH_HPP
#define MOYAL_QUANTUM_LENGTH_HPP

#include "moyal/states.hpp"
#include "moyal/tensor_space.hpp"

#include <optional>
#include <string>
#include <vector>

namespace moyal {

struct DistanceReport {
    double value = 0.0;
    std::string method;                   // "analytic" | "operator-evaluation" | "solver"
    int truncation = 0;                   // largest truncation used (0 for pure closed forms)
    double residual = 0.0;                // analytic/operator gap, or last schedule step
    bool converged = true;
    std::optional<double> analytic_value;
    std::optional<double> operator_value;
    int gap_sign = 0;                     // sign of d_L2 - Lambda^-2 (modified length only)
};

std::string report_csv_row(const std::string& quantity, const std::string& s1,
                           const std::string& s2, const DistanceReport& r);
std::string report_json(const std::string& quantity, const std::string& s1, const std::string& s2,
                        const DistanceReport& r);

/// One wide row per pair: spec1, spec2, d_L2, d_L, d'_L, method, N, residual.
std::string lengths_csv_header();
std::string lengths_csv_row(const StateSpec& s1, const StateSpec& s2, const ModelParams& params);

/// Closed form of d_L2 on generalized coherent states, 2E_m + 2E_n + |k - kt|^2.
double coherent_d_L2(int m, int n, const Vec2& kappa, const Vec2& kappa_t, double lambda_p);

/// Closed form of d_L2 on a two-sphere family S_mn, valid for n > m+1 only.
/// Throws FormulaInapplicable otherwise.
double sphere_d_L2(int m, int n, double z1, double z2, double lambda_p);

/// Closed form where one exists (coherent pairs, same-sphere pairs with n > m+1).
std::optional<double> analytic_d_L2(const StateSpec& s1, const StateSpec& s2, double lambda_p);

/// Quantum square-length (phi x phi~)(L^2); operator evaluation over a truncation schedule,
/// analytic value attached when available.
DistanceReport d_L2(const StateSpec& s1, const StateSpec& s2, const ModelParams& params);

/// Quantum length (phi x phi~)(L) via the operator square root.
DistanceReport d_L(const StateSpec& s1, const StateSpec& s2, const ModelParams& params);

/// Lambda^-2 = sqrt(d_L2(s1,s1) d_L2(s2,s2)), the geometric mean of self square-lengths.
double lambda_inv2(const StateSpec& s1, const StateSpec& s2, const ModelParams& params);

/// Modified quantum length sqrt|d_L2 - Lambda^-2|; gap_sign records the sign of the gap.
DistanceReport d_L_mod(const StateSpec& s1, const StateSpec& s2, const ModelParams& params);

/// Truncation schedule for operator evaluations: params.truncation doubling up to a cap.
std::vector<int> default_schedule(const ModelParams& params, int cap);

}  // namespace moyal

#endif
