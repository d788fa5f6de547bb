#include "doctest.h"
#include "moyal/quantum_length.hpp"
#include "moyal/spectral_distance.hpp"

#include <cmath>

using namespace moyal;

TEST_CASE("eigenstate distance series") {
    CHECK(dist_eigenstates(0, 1, 1.0) == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-14));
    CHECK(dist_eigenstates(3, 3, 1.0) == 0.0);
    CHECK(dist_eigenstates(0, 2, 1.0) ==
          doctest::Approx((1 / std::sqrt(2.0)) * (1 + 1 / std::sqrt(2.0))).epsilon(1e-14));
    // symmetric and additive along chains
    CHECK(dist_eigenstates(5, 2, 1.0) == doctest::Approx(dist_eigenstates(2, 5, 1.0)));
    for (int m = 0; m <= 4; ++m)
        for (int n = m; n <= 8; ++n)
            for (int p = n; p <= 10; ++p)
                CHECK(dist_eigenstates(m, p, 1.0) ==
                      doctest::Approx(dist_eigenstates(m, n, 1.0) + dist_eigenstates(n, p, 1.0))
                          .epsilon(1e-13));
    CHECK(dist_eigenstates(0, 1, 3.0) == doctest::Approx(3 / std::sqrt(2.0)));
}

TEST_CASE("translate distance") {
    CHECK(dist_translates(Vec2(0, 0), Vec2(3, 4)) == doctest::Approx(5.0));
    CHECK(dist_translates(Vec2(2, 1), Vec2(2, 1)) == 0.0);
    CHECK(dist_translates(Vec2(1, 1), Vec2(1, 2)) == doctest::Approx(1.0));
}

TEST_CASE("distance bounds") {
    DistBounds b = dist_bounds(0, 1, Vec2(0, 0), Vec2(0, 0), 1.0);
    CHECK(b.lower == doctest::Approx(b.upper));
    CHECK(b.lower == doctest::Approx(1 / std::sqrt(2.0)));

    DistBounds c = dist_bounds(0, 3, Vec2(1, 0), Vec2(0, 2), 1.0);
    CHECK(c.lower <= c.upper);
    CHECK(c.lower >= 0.0);

    // degenerate pair: interval is exactly {|kappa - kappa~|}
    DistBounds d = dist_bounds(2, 2, Vec2(1, 0), Vec2(4, 4), 1.0);
    CHECK(d.lower == doctest::Approx(5.0));
    CHECK(d.upper == doctest::Approx(5.0));

    CHECK_THROWS_AS(dist_bounds(3, 1, Vec2(0, 0), Vec2(0, 0), 1.0), std::invalid_argument);
    CHECK_THROWS_AS(ratio_convergence(5, Vec2(0, 0), Vec2(0, 0), 4, 1.0), std::invalid_argument);

    IntegralBounds ib = eigen_integral_bounds(0, 1, 1.0);
    CHECK(ib.lower == doctest::Approx(std::sqrt(2.0) * (std::sqrt(2.0) - 1.0)).epsilon(1e-12));
    // the series value respects the bracket wherever the bracket is ordered
    for (int m = 0; m <= 12; ++m)
        for (int n = m + 1; n <= 40; ++n) {
            IntegralBounds e = eigen_integral_bounds(m, n, 1.0);
            double d_mn = dist_eigenstates(m, n, 1.0);
            CHECK(e.lower <= d_mn + 1e-12);
            if (e.valid) CHECK(d_mn <= e.upper + 1e-12);
        }
    // long-range rows up to n = 500
    for (int m : {0, 5, 50, 200})
        for (int n : {m + 1, m + 7, 499, 500}) {
            if (n <= m) continue;
            IntegralBounds e = eigen_integral_bounds(m, n, 1.0);
            double d_mn = dist_eigenstates(m, n, 1.0);
            CHECK(e.lower <= d_mn + 1e-12);
            if (e.valid) CHECK(d_mn <= e.upper + 1e-12);
        }
}

TEST_CASE("ratio convergence toward the modified length") {
    auto rows = ratio_convergence(0, Vec2(0, 0), Vec2(0, 0), 50, 1.0);
    REQUIRE(rows.size() == 50);
    CHECK(rows[0].n == 1);
    // d_D/d'_L at n = 1 is the 96.6% benchmark ratio
    CHECK(rows[0].dd_mid / rows[0].d_prime == doctest::Approx(0.9659258).epsilon(1e-6));
    CHECK(std::abs(rows[0].ratio) == doctest::Approx(1.0 - 0.96592583).epsilon(1e-5));
    CHECK(std::abs(rows.back().ratio) < 0.01);
    // tail shrinks monotonically well after the start
    for (size_t i = 10; i + 1 < rows.size(); ++i)
        CHECK(std::abs(rows[i + 1].ratio) <= std::abs(rows[i].ratio) + 1e-15);

    // large-translation variant: midpoint estimate collapses toward d'_L
    auto tr = ratio_convergence(0, Vec2(0, 0), Vec2(40, 0), 3, 1.0);
    CHECK(std::abs(tr.back().ratio) < 0.01);
    CHECK(tr.back().dd_lower <= tr.back().dd_mid);
    CHECK(tr.back().dd_mid <= tr.back().dd_upper);
}

TEST_CASE("sphere pair distance and ratio limit") {
    CHECK(dist_sphere_pair(0, 2, 1.0, 1.0) == doctest::Approx(dist_eigenstates(0, 2, 1.0)));
    CHECK(dist_sphere_pair(0, 2, 0.0, 1.0) == 0.0);
    CHECK(dist_sphere_pair(0, 2, 0.5, 1.0) ==
          doctest::Approx(0.5 * (1 / std::sqrt(2.0)) * (1 + 1 / std::sqrt(2.0))).epsilon(1e-13));

    CHECK_THROWS_AS(sphere_ratio_limit(0, 0.0, 100, 1.0), std::domain_error);

    SphereRatioSeries s = sphere_ratio_limit(0, 0.6, 4000, 1.0);
    CHECK(s.target == doctest::Approx(std::sqrt(1.8)).epsilon(1e-12));
    CHECK(std::abs(s.ratio.back() - s.target) < 0.03);
    // z -> 0+ target tends to sqrt(2)
    SphereRatioSeries tiny = sphere_ratio_limit(0, 1e-6, 3, 1.0);
    CHECK(tiny.target == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
    // z = 1 target is 1 and the sequence is the plain eigenstate ratio
    SphereRatioSeries one = sphere_ratio_limit(0, 1.0, 3, 1.0);
    CHECK(one.target == doctest::Approx(1.0));
}

TEST_CASE("doubled triple") {
    DoubledTripleParams lam = fix_lambda(0, 1.0);
    CHECK(lam.lambda_cap == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-14));
    CHECK(fix_lambda(1, 1.0).lambda_cap == doctest::Approx(1 / std::sqrt(6.0)).epsilon(1e-14));
    CHECK(fix_lambda(0, 2.0).lambda_cap == doctest::Approx(0.5 / std::sqrt(2.0)).epsilon(1e-14));

    StateSpec w0{Eigenstate{0}};
    // two copies of the ground state across the sheets: 1/|Lambda| = sqrt(2)
    CHECK(doubled_distance(w0, 1, w0, 2, lam, 1.0) == doctest::Approx(std::sqrt(2.0)));
    // same sheet reduces to d_D
    StateSpec w2{Eigenstate{2}};
    CHECK(doubled_distance(w0, 1, w2, 1, lam, 1.0) ==
          doctest::Approx(dist_eigenstates(0, 2, 1.0)).epsilon(1e-13));
    // cross-sheet coherent pair at Lambda^2 = 1/2: sqrt(|dk|^2 + 2)
    StateSpec c1{Coherent{0, Vec2(1, 0)}}, c2{Coherent{0, Vec2(4, 4)}};
    CHECK(doubled_distance(c1, 1, c2, 2, lam, 1.0) == doctest::Approx(std::sqrt(27.0)).epsilon(1e-13));

    StateSpec c3{Coherent{1, Vec2(2, 0)}};
    CHECK_THROWS_AS(doubled_distance(c1, 1, c3, 2, lam, 1.0), UnsupportedPair);
    CHECK_THROWS_AS(doubled_distance(c1, 0, c3, 2, lam, 1.0), std::invalid_argument);
}

TEST_CASE("pythagoras identity on coherent families") {
    // d_{D'}^2(w^1, wt^2) with Lambda = fix_lambda(m) equals d_L2 exactly
    ModelParams params{1.0, 16, 1e-8};
    for (int m : {0, 1, 2}) {
        DoubledTripleParams lam = fix_lambda(m, 1.0);
        StateSpec a{Coherent{m, Vec2(0.3, -1.0)}};
        StateSpec b{Coherent{m, Vec2(-2.0, 0.4)}};
        double dd = doubled_distance(a, 1, b, 2, lam, 1.0);
        double dl2 = d_L2(a, b, params).value;
        CHECK(dd * dd == doctest::Approx(dl2).epsilon(1e-12));
        // and Eq-69 style equality with the modified length on the same sheet
        CHECK(doubled_distance(a, 1, b, 1, lam, 1.0) ==
              doctest::Approx(d_L_mod(a, b, params).value).epsilon(1e-10));
    }
}

TEST_CASE("analytic distance families") {
    StateSpec pole{Sphere{0, 3, 0, 0, 1}};
    StateSpec w3{Eigenstate{3}};
    auto d = analytic_dist(pole, w3, 1.0);
    REQUIRE(d.has_value());
    CHECK(*d == doctest::Approx(dist_eigenstates(0, 3, 1.0)));

    StateSpec sa{Sphere{1, 4, 0.8, 0, 0.6}}, sb{Sphere{1, 4, 0.8, 0, -0.6}};
    auto ds = analytic_dist(sa, sb, 1.0);
    REQUIRE(ds.has_value());
    CHECK(*ds == doctest::Approx(0.6 * dist_eigenstates(1, 4, 1.0)).epsilon(1e-13));

    StateSpec mixed{Coherent{2, Vec2(1, 1)}};
    CHECK_FALSE(analytic_dist(StateSpec(Eigenstate{0}), mixed, 1.0).has_value());
}
