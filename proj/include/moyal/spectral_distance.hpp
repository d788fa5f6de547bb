#ifndef MOYAL_SPECTRAL_DISTANCE_HPP
#define MOYAL_SPECTRAL_DISTANCE_HPP

#include "moyal/states.hpp"

#include <optional>
#include <vector>

namespace moyal {

struct DoubledTripleParams {
    double lambda_cap = 1.0;  // |Lambda|, inverse length
    DoubledTripleParams() = default;
    explicit DoubledTripleParams(double lc) : lambda_cap(lc) {
        if (lambda_cap <= 0.0) throw std::invalid_argument("Lambda must be positive");
    }
};

/// d_D(w_m, w_n) = (lambda_p/sqrt2) sum_{k=m+1}^{n} 1/sqrt(k), symmetric in (m,n).
double dist_eigenstates(int m, int n, double lambda_p);

/// d_D between translates of one state: |kappa - kappa~|.
double dist_translates(const Vec2& kappa, const Vec2& kappa_t);

struct DistBounds {
    double lower = 0.0;
    double upper = 0.0;
};

/// Triangle bracket for d_D(alpha_k w_m, alpha_k~ w_n) built from the exact eigenstate series.
DistBounds dist_bounds(int m, int n, const Vec2& kappa, const Vec2& kappa_t, double lambda_p);

/// Series/integral comparison bracket for d_D(w_m, w_n), m <= n.  The upper clause is only
/// meaningful when the bracket is well ordered; `valid` reports that.
struct IntegralBounds {
    double lower = 0.0;
    double upper = 0.0;
    bool valid = false;
};
IntegralBounds eigen_integral_bounds(int m, int n, double lambda_p);

struct RatioRow {
    int n = 0;
    double d_prime = 0.0;   // modified quantum length
    double dd_lower = 0.0;  // d_D bracket (collapses to the exact value when kappa == kappa~)
    double dd_upper = 0.0;
    double dd_mid = 0.0;
    double ratio = 0.0;     // (dd_mid - d_prime)/d_prime
};

/// High-energy convergence series (d_D - d'_L)/d'_L for n = m+1 .. n_max.
std::vector<RatioRow> ratio_convergence(int m, const Vec2& kappa, const Vec2& kappa_t, int n_max,
                                        double lambda_p);

/// d_D between opposite-z points of the sphere family S_mn: |z| d_D(w_m, w_n).
double dist_sphere_pair(int m, int n, double z, double lambda_p);

struct SphereRatioSeries {
    std::vector<double> ratio;  // index 0 is n = m+2
    int n_first = 0;
    double target = 0.0;        // sqrt(1 + sqrt(1 - z^2))
};
SphereRatioSeries sphere_ratio_limit(int m, double z, int n_max, double lambda_p);

/// Spectral distance in the doubled triple; sheet indices are 1 or 2.
/// Same sheet -> d_D when the pair is analytically known; cross sheet -> Pythagoras.
double doubled_distance(const StateSpec& s1, int sheet1, const StateSpec& s2, int sheet2,
                        const DoubledTripleParams& params, double lambda_p);

/// Lambda = 1/sqrt(d_L2(w_m, w_m)) = 1/(lambda_p sqrt(4m+2)).
DoubledTripleParams fix_lambda(int m, double lambda_p);

/// Closed-form d_D for the families where one is known; nullopt otherwise.
std::optional<double> analytic_dist(const StateSpec& s1, const StateSpec& s2, double lambda_p);

}  // namespace moyal

#endif
