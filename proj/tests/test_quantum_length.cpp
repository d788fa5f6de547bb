#include "doctest.h"
#include "moyal/quantum_length.hpp"

#include <cmath>

using namespace moyal;

namespace {
const ModelParams kParams{1.0, 16, 1e-8};
}

TEST_CASE("square length closed forms") {
    StateSpec w0{Eigenstate{0}};
    DistanceReport r = d_L2(w0, w0, kParams);
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(r.method == "analytic");
    REQUIRE(r.operator_value.has_value());
    CHECK(*r.operator_value == doctest::Approx(2.0).epsilon(1e-10));

    // translation invariance: only kappa - kappa~ enters
    StateSpec c1{Coherent{0, Vec2(1, 1)}}, c2{Coherent{0, Vec2(2, 3)}};
    DistanceReport rc = d_L2(c1, c2, kParams);
    CHECK(rc.value == doctest::Approx(2.0 + 5.0).epsilon(1e-12));
    CHECK(rc.residual < 1e-7);  // operator path agrees

    StateSpec w1{Eigenstate{1}};
    CHECK(d_L2(w1, w0, kParams).value == doctest::Approx(4.0).epsilon(1e-12));

    // opposite-z sphere pair on S_02: 2(E_0 + E_2) = 6
    StateSpec sa{Sphere{0, 2, 0.6, 0, 0.8}}, sb{Sphere{0, 2, 0.6, 0, -0.8}};
    DistanceReport rs = d_L2(sa, sb, kParams);
    CHECK(rs.value == doctest::Approx(6.0).epsilon(1e-12));
    CHECK(rs.residual < 1e-8);

    // symmetric in its arguments
    StateSpec sx{Sphere{0, 3, 0, 1, 0}};
    CHECK(d_L2(w1, sx, kParams).value == doctest::Approx(d_L2(sx, w1, kParams).value));

    // the closed sphere form needs n > m+1
    CHECK_THROWS_AS(sphere_d_L2(0, 1, 0.3, 0.3, 1.0), FormulaInapplicable);
    StateSpec t1{Sphere{0, 1, 1, 0, 0}};
    DistanceReport rt = d_L2(t1, t1, kParams);  // operator path still available
    CHECK(rt.method == "operator-evaluation");
    // ladder-form oracle on S_01: 4<H> - 4|<a>|^2 = 4 - 4/4 = 3
    CHECK(rt.value == doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("quantum length and the square root bound") {
    ModelParams p{1.0, 16, 1e-9};
    StateSpec w0{Eigenstate{0}};
    DistanceReport r = d_L(w0, w0, p);
    CHECK(r.value == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));

    StateSpec w1{Eigenstate{1}};
    DistanceReport r01 = d_L(w0, w1, p);
    CHECK(r01.value < 2.0 - 1e-3);  // strictly below sqrt(d_L2) = 2

    // d_L(coherent self pair) stays at the minimal length for any kappa
    StateSpec ck{Coherent{0, Vec2(1.25, -0.5)}};
    CHECK(d_L(ck, ck, p).value == doctest::Approx(std::sqrt(2.0)).epsilon(1e-7));

    // symmetric in its arguments
    CHECK(d_L(w1, w0, p).value == doctest::Approx(r01.value).epsilon(1e-12));
}

TEST_CASE("geometric mean of self lengths") {
    StateSpec w0{Eigenstate{0}}, w1{Eigenstate{1}};
    CHECK(lambda_inv2(w0, w0, kParams) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(lambda_inv2(w0, w1, kParams) == doctest::Approx(2.0 * std::sqrt(3.0)).epsilon(1e-12));
    // translates of w_m keep the self square-length 4 E_m
    StateSpec cm{Coherent{2, Vec2(0.7, 0.1)}};
    CHECK(lambda_inv2(cm, cm, kParams) == doctest::Approx(10.0).epsilon(1e-12));
}

TEST_CASE("modified quantum length") {
    StateSpec w0{Eigenstate{0}}, w1{Eigenstate{1}};
    DistanceReport r = d_L_mod(w0, w1, kParams);
    CHECK(r.value == doctest::Approx(std::sqrt(3.0) - 1.0).epsilon(1e-12));
    CHECK(r.gap_sign == 1);

    // |kappa - kappa~| on a coherent family
    StateSpec c1{Coherent{1, Vec2(0, 1)}}, c2{Coherent{1, Vec2(3, -3)}};
    CHECK(d_L_mod(c1, c2, kParams).value == doctest::Approx(5.0).epsilon(1e-12));

    // vanishes on the diagonal
    CHECK(d_L_mod(c1, c1, kParams).value < 1e-9);

    // distinct equator states on S_02 are at zero modified length
    StateSpec sa{Sphere{0, 2, 1, 0, 0}}, sb{Sphere{0, 2, 0, 1, 0}};
    CHECK(d_L_mod(sa, sb, kParams).value < 1e-9);

    // eigenstate ladder: sqrt(2n+1) - sqrt(2m+1)
    for (int m = 0; m <= 3; ++m)
        for (int n = m; n <= 5; ++n) {
            DistanceReport rr = d_L_mod(StateSpec(Eigenstate{m}), StateSpec(Eigenstate{n}), kParams);
            CHECK(rr.value ==
                  doctest::Approx(std::sqrt(2.0 * n + 1) - std::sqrt(2.0 * m + 1)).epsilon(1e-10));
        }
}

TEST_CASE("lambda_p scaling of the report columns") {
    ModelParams p2{2.0, 16, 1e-8};
    StateSpec w0{Eigenstate{0}};
    CHECK(d_L2(w0, w0, p2).value == doctest::Approx(8.0).epsilon(1e-12));        // 4 E_0, E_0 = 2
    CHECK(d_L(w0, w0, p2).value == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-9));
}

TEST_CASE("report serialization") {
    StateSpec w0{Eigenstate{0}}, w1{Eigenstate{1}};
    DistanceReport r = d_L_mod(w0, w1, kParams);
    std::string csv = report_csv_row("d_L_mod", w0.text(), w1.text(), r);
    CHECK(csv.find("d_L_mod,eig:0,eig:1,") == 0);
    std::string js = report_json("d_L_mod", w0.text(), w1.text(), r);
    CHECK(js.find("\"method\"") != std::string::npos);

    std::string wide = lengths_csv_row(w0, w1, kParams);
    CHECK(wide.find("eig:0,eig:1,4,1.93185165258,0.732050807569,") == 0);
    CHECK(lengths_csv_header().find("d_L_mod") != std::string::npos);
}

TEST_CASE("square-root bound across state kinds") {
    // d_L <= sqrt(d_L2) for every tested pair; equality only on the coherent ground diagonal
    ModelParams p{1.0, 16, 1e-8};
    std::vector<StateSpec> pool = {
        StateSpec(Eigenstate{0}),      StateSpec(Eigenstate{3}),
        StateSpec(Coherent{0, Vec2(1.0, -0.5)}), StateSpec(Coherent{1, Vec2(0.3, 0.3)}),
        StateSpec(Sphere{0, 2, 0.6, 0, 0.8}),    StateSpec(parse_state("vec:0.6,0,0.8")),
    };
    for (size_t i = 0; i < pool.size(); ++i)
        for (size_t j = 0; j < pool.size(); ++j) {
            double dl = d_L(pool[i], pool[j], p).value;
            double bound = std::sqrt(d_L2(pool[i], pool[j], p).value);
            CHECK(dl <= bound + 1e-9);
            // symmetry of the evaluation
            CHECK(d_L2(pool[i], pool[j], p).value ==
                  doctest::Approx(d_L2(pool[j], pool[i], p).value).epsilon(1e-11));
        }
    // distinct ground translates stay strictly below the root
    StateSpec a{Coherent{0, Vec2(0, 0)}}, b{Coherent{0, Vec2(1, 0)}};
    CHECK(d_L(a, b, p).value < std::sqrt(d_L2(a, b, p).value) - 1e-3);
}

TEST_CASE("operator path is translation invariant") {
    const int n = 72;
    for (auto [m1, m2] : {std::pair{0, 0}, {0, 2}, {1, 2}}) {
        double base = pair_expect_length_sq(StateSpec(Coherent{m1, Vec2(0.4, -0.2)}),
                                            StateSpec(Coherent{m2, Vec2(-0.6, 0.9)}), n, 1.0);
        double moved = pair_expect_length_sq(StateSpec(Coherent{m1, Vec2(0.4 + 1.1, -0.2 - 0.7)}),
                                             StateSpec(Coherent{m2, Vec2(-0.6 + 1.1, 0.9 - 0.7)}),
                                             n, 1.0);
        CHECK(moved == doctest::Approx(base).epsilon(1e-8));
    }
}
