#include "moyal/spectral_distance.hpp"

#include <cmath>

namespace moyal {

namespace {

double energy(int m, double lambda_p) { return lambda_p * lambda_p * (m + 0.5); }

// Collapse sphere poles and single-component vectors onto eigenstates, kappa=0 onto eig.
StateSpec canonical(const StateSpec& s) {
    if (const auto* c = std::get_if<Coherent>(&s.v)) {
        if (c->kappa.norm() == 0.0) return StateSpec(Eigenstate{c->m});
    } else if (const auto* sp = std::get_if<Sphere>(&s.v)) {
        if (sp->z == 1.0) return StateSpec(Eigenstate{sp->m});
        if (sp->z == -1.0) return StateSpec(Eigenstate{sp->n});
    } else if (const auto* w = std::get_if<VectorState>(&s.v)) {
        int nz = -1;
        for (size_t i = 0; i < w->coeffs.size(); ++i) {
            if (std::abs(w->coeffs[i]) == 0.0) continue;
            if (nz >= 0) return s;
            nz = static_cast<int>(i);
        }
        if (nz >= 0) return StateSpec(Eigenstate{nz});
    }
    return s;
}

}  // namespace

double dist_eigenstates(int m, int n, double lambda_p) {
    if (m < 0 || n < 0) throw std::invalid_argument("dist_eigenstates: indices must be >= 0");
    int lo = std::min(m, n), hi = std::max(m, n);
    double sum = 0.0;
    for (int k = lo + 1; k <= hi; ++k) sum += 1.0 / std::sqrt(double(k));
    return lambda_p / std::sqrt(2.0) * sum;
}

double dist_translates(const Vec2& kappa, const Vec2& kappa_t) { return (kappa - kappa_t).norm(); }

DistBounds dist_bounds(int m, int n, const Vec2& kappa, const Vec2& kappa_t, double lambda_p) {
    if (m > n) throw std::invalid_argument("dist_bounds: needs m <= n");
    double dmn = dist_eigenstates(m, n, lambda_p);
    double k = (kappa - kappa_t).norm();
    return {std::abs(dmn - k), dmn + k};
}

IntegralBounds eigen_integral_bounds(int m, int n, double lambda_p) {
    if (m > n) throw std::invalid_argument("eigen_integral_bounds: needs m <= n");
    IntegralBounds b;
    b.lower = lambda_p * (std::sqrt(2.0 * (n + 1)) - std::sqrt(2.0 * (m + 1)));
    b.upper = lambda_p * (std::sqrt(2.0 * n) - (1.0 + 2.0 * m) / std::sqrt(2.0 * (m + 1)));
    b.valid = b.upper >= b.lower;
    return b;
}

std::vector<RatioRow> ratio_convergence(int m, const Vec2& kappa, const Vec2& kappa_t, int n_max,
                                        double lambda_p) {
    if (n_max <= m) throw std::invalid_argument("ratio_convergence: needs n_max > m");
    std::vector<RatioRow> rows;
    const double k = (kappa - kappa_t).norm();
    const bool translated = k > 0.0;
    for (int n = m + 1; n <= n_max; ++n) {
        RatioRow r;
        r.n = n;
        double e = std::sqrt(2.0 * energy(m, lambda_p)) - std::sqrt(2.0 * energy(n, lambda_p));
        r.d_prime = std::sqrt(e * e + k * k);
        double dmn = dist_eigenstates(m, n, lambda_p);
        if (translated) {
            r.dd_lower = std::abs(dmn - k);
            r.dd_upper = dmn + k;
            r.dd_mid = 0.5 * (r.dd_lower + r.dd_upper);
        } else {
            r.dd_lower = r.dd_upper = r.dd_mid = dmn;
        }
        r.ratio = (r.dd_mid - r.d_prime) / r.d_prime;
        rows.push_back(r);
    }
    return rows;
}

double dist_sphere_pair(int m, int n, double z, double lambda_p) {
    if (n <= m) throw std::invalid_argument("dist_sphere_pair: needs n > m");
    if (std::abs(z) > 1.0) throw std::invalid_argument("dist_sphere_pair: needs |z| <= 1");
    return std::abs(z) * dist_eigenstates(m, n, lambda_p);
}

SphereRatioSeries sphere_ratio_limit(int m, double z, int n_max, double lambda_p) {
    if (z == 0.0)
        throw std::domain_error("sphere_ratio_limit: d'_L vanishes at z = 0, limit undefined");
    if (std::abs(z) > 1.0) throw std::invalid_argument("sphere_ratio_limit: needs |z| <= 1");
    SphereRatioSeries out;
    out.n_first = m + 2;
    out.target = std::sqrt(1.0 + std::sqrt(1.0 - z * z));
    for (int n = m + 2; n <= n_max; ++n) {
        double em = energy(m, lambda_p), en = energy(n, lambda_p);
        double sum = em + en, dif = em - en;
        double dp2 = 2.0 * (sum - std::sqrt(sum * sum - z * z * dif * dif));
        out.ratio.push_back(dist_sphere_pair(m, n, z, lambda_p) / std::sqrt(dp2));
    }
    return out;
}

std::optional<double> analytic_dist(const StateSpec& s1_in, const StateSpec& s2_in,
                                    double lambda_p) {
    StateSpec s1 = canonical(s1_in), s2 = canonical(s2_in);

    auto coh = [](const StateSpec& s) -> std::optional<std::pair<int, Vec2>> {
        if (const auto* e = std::get_if<Eigenstate>(&s.v)) return {{e->m, Vec2::Zero()}};
        if (const auto* c = std::get_if<Coherent>(&s.v)) return {{c->m, c->kappa}};
        return std::nullopt;
    };
    auto c1 = coh(s1), c2 = coh(s2);
    if (c1 && c2) {
        if (c1->first == c2->first) return dist_translates(c1->second, c2->second);
        if ((c1->second - c2->second).norm() == 0.0)
            return dist_eigenstates(c1->first, c2->first, lambda_p);
        return std::nullopt;  // only the triangle bracket is known
    }
    const auto* p1 = std::get_if<Sphere>(&s1.v);
    const auto* p2 = std::get_if<Sphere>(&s2.v);
    if (p1 && p2 && p1->m == p2->m && p1->n == p2->n) {
        if (p1->x == p2->x && p1->y == p2->y) {
            if (p1->z == p2->z) return 0.0;
            if (p1->z == -p2->z) return dist_sphere_pair(p1->m, p1->n, p1->z, lambda_p);
        }
    }
    return std::nullopt;
}

double doubled_distance(const StateSpec& s1, int sheet1, const StateSpec& s2, int sheet2,
                        const DoubledTripleParams& params, double lambda_p) {
    if ((sheet1 != 1 && sheet1 != 2) || (sheet2 != 1 && sheet2 != 2))
        throw std::invalid_argument("doubled_distance: sheets are 1 or 2");
    auto d = analytic_dist(s1, s2, lambda_p);
    if (!d)
        throw UnsupportedPair("doubled_distance: no closed form for (" + s1.text() + ", " +
                              s2.text() + "); use the solver module");
    if (sheet1 == sheet2) return *d;
    double internal = 1.0 / params.lambda_cap;
    return std::sqrt(*d * *d + internal * internal);
}

DoubledTripleParams fix_lambda(int m, double lambda_p) {
    if (m < 0) throw std::invalid_argument("fix_lambda: m must be >= 0");
    return DoubledTripleParams(1.0 / (lambda_p * std::sqrt(4.0 * m + 2.0)));
}

}  // namespace moyal
