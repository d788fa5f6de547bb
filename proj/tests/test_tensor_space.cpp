#include "doctest.h"
#include "moyal/tensor_space.hpp"

#include <cmath>
#include <random>

using namespace moyal;

namespace {

// interior block mask: total number i+j <= n-2
bool interior(int p, int q, int n) {
    int i1 = p / n, j1 = p % n, i2 = q / n, j2 = q % n;
    return (i1 + j1 <= n - 2) && (i2 + j2 <= n - 2);
}

Matrix da_matrix(int n, double lambda_p) {
    auto [a, ad] = ladder(n, lambda_p);
    return universal_diff(a).entries;
}

}  // namespace

TEST_CASE("universal differential basics") {
    TruncatedOperator eye{Matrix::Identity(5, 5), 1.0};
    CHECK(universal_diff(eye).entries.norm() == 0.0);

    const int n = 8;
    auto [a, ad] = ladder(n, 1.0);
    Matrix da = universal_diff(a).entries;
    Matrix dad = universal_diff(ad).entries;
    Matrix c = da * dad - dad * da;
    for (int p = 0; p < n * n; ++p)
        for (int q = 0; q < n * n; ++q)
            if (interior(p, q, n)) {
                Complex want = (p == q) ? Complex(2.0) : Complex(0.0);
                CHECK(std::abs(c(p, q) - want) < 1e-13);
            }

    // symmetric state has vanishing differential expectation
    auto [q1, q2] = position_ops(n, 1.0);
    Matrix dq1 = universal_diff(q1).entries;
    CHECK(std::abs(dq1(0, 0)) < 1e-15);
}

TEST_CASE("two length-square constructions agree on the interior block") {
    const int n = 9;
    Matrix l2a = length_sq(n, 1.0).entries;
    Matrix l2b = length_sq_ladder_form(n, 1.0).entries;
    for (int p = 0; p < n * n; ++p)
        for (int q = 0; q < n * n; ++q)
            if (interior(p, q, n)) CHECK(std::abs(l2a(p, q) - l2b(p, q)) < 1e-10);
    // and they do differ at the truncation edge
    CHECK((l2a - l2b).norm() > 1.0);
}

TEST_CASE("length square ground value and positivity") {
    const int n = 10;
    TwoPointOperator l2 = length_sq(n, 1.0);
    CHECK(std::abs(l2.entries(0, 0) - Complex(2.0)) < 1e-13);  // <00|L^2|00> = 4 E_0

    // sector blocks reproduce the dense spectrum
    Eigen::SelfAdjointEigenSolver<Matrix> es(l2.entries, Eigen::EigenvaluesOnly);
    std::vector<double> dense(es.eigenvalues().data(), es.eigenvalues().data() + n * n);
    std::vector<double> sect;
    for (const auto& s : length_sq_sectors(n, 1.0)) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> bs(s.block, Eigen::EigenvaluesOnly);
        for (int i = 0; i < bs.eigenvalues().size(); ++i) sect.push_back(bs.eigenvalues()(i));
    }
    std::sort(dense.begin(), dense.end());
    std::sort(sect.begin(), sect.end());
    for (size_t i = 0; i < dense.size(); ++i)
        CHECK(dense[i] == doctest::Approx(sect[i]).epsilon(1e-9));
    CHECK(dense.front() > -1e-10);  // sum of squares is positive semidefinite

    // interior-sector minimum sits exactly at 2 lambda_p^2
    double min_interior = 1e300;
    for (const auto& s : length_sq_sectors(30, 1.0)) {
        if (s.s > 28) continue;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> bs(s.block, Eigen::EigenvaluesOnly);
        min_interior = std::min(min_interior, bs.eigenvalues().minCoeff());
    }
    CHECK(min_interior == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("length operator squares back to length_sq on the interior") {
    const int n = 8;
    Matrix l = length(n, 1.0).entries;
    Matrix l2 = length_sq(n, 1.0).entries;
    Matrix lsq = l * l;
    for (int p = 0; p < n * n; ++p)
        for (int q = 0; q < n * n; ++q)
            if (interior(p, q, n)) CHECK(std::abs(lsq(p, q) - l2(p, q)) < 1e-9);
    CHECK(std::abs(l(0, 0) - Complex(std::sqrt(2.0))) < 1e-12);
}

TEST_CASE("spectrum of L") {
    auto rows = spectrum_L(20, 1.0, 3);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].numeric == doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));
    CHECK(rows[1].numeric == doctest::Approx(std::sqrt(6.0)).epsilon(1e-10));
    CHECK(rows[2].numeric == doctest::Approx(std::sqrt(10.0)).epsilon(1e-10));
    CHECK(rows[0].multiplicity == 19);
    CHECK(rows[1].multiplicity == 18);

    CHECK(spectrum_L(12, 1.0, 0).empty());
    auto deep = spectrum_L(12, 1.0, 9);
    CHECK_FALSE(deep.back().reliable);

    // lambda_p scaling of levels
    auto scaled = spectrum_L(16, 2.0, 2);
    CHECK(scaled[0].numeric == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-10));
    CHECK(scaled[1].numeric == doctest::Approx(2.0 * std::sqrt(6.0)).epsilon(1e-10));
}

TEST_CASE("ground kernel") {
    const int n = 8;
    auto kernel = ground_kernel(n, 1.0);
    REQUIRE(static_cast<int>(kernel.size()) == n - 1);
    Matrix da = da_matrix(n, 1.0);

    // |00> and the two explicit entangled ground states
    CHECK(std::abs(kernel[0](0) - Complex(1)) < 1e-14);
    CVector v2 = CVector::Zero(n * n);
    v2(0 * n + 1) = 1 / std::sqrt(2.0);
    v2(1 * n + 0) = 1 / std::sqrt(2.0);
    CHECK((kernel[1] - v2).norm() < 1e-13);
    CVector v3 = CVector::Zero(n * n);
    v3(1 * n + 1) = std::sqrt(2.0) / 2.0;
    v3(2 * n + 0) = 0.5;
    v3(0 * n + 2) = 0.5;
    CHECK((kernel[2] - v3).norm() < 1e-13);

    int rank_one = 0;
    for (size_t s = 0; s < kernel.size(); ++s) {
        CHECK((da * kernel[s]).norm() < 1e-10);
        CHECK(kernel[s].norm() == doctest::Approx(1.0).epsilon(1e-13));
        int r = schmidt_rank(kernel[s], n);
        CHECK(r == static_cast<int>(s) + 1);  // binomial antidiagonal: full rank in its sector
        if (r == 1) ++rank_one;
        for (size_t t = 0; t < s; ++t) CHECK(std::abs(kernel[s].dot(kernel[t])) < 1e-14);
    }
    CHECK(rank_one == 1);
}

TEST_CASE("uncertainty relations") {
    const int n = 64;
    auto [q1, q2] = position_ops(n, 1.0);
    TruncatedOperator h = hamiltonian(n, 1.0);
    StateSpec w0{Eigenstate{0}};
    CHECK(uncertainty(w0, q1) == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-12));
    CHECK(uncertainty(w0, h) < 1e-12);
    // translation invariance of the variance
    for (Vec2 k : {Vec2(1, 0), Vec2(-2, 1.5)}) {
        StateSpec c{Coherent{0, k}};
        CHECK(uncertainty(c, q1) == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-8));
    }
    // equality case of the uncertainty product
    CHECK(uncertainty(w0, q1) * uncertainty(w0, q2) == doctest::Approx(0.5).epsilon(1e-12));

    // random vector states obey Delta q1 Delta q2 >= 1/2 (states padded below the edge)
    std::mt19937 gen(7);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int trial = 0; trial < 25; ++trial) {
        VectorState w;
        double norm2 = 0;
        for (int i = 0; i < 12; ++i) {
            Complex c(normal(gen), normal(gen));
            w.coeffs.push_back(c);
            norm2 += std::norm(c);
        }
        for (auto& c : w.coeffs) c /= std::sqrt(norm2);
        StateSpec s{w};
        CHECK(uncertainty(s, q1) * uncertainty(s, q2) >= 0.5 - 1e-8);
    }
}

TEST_CASE("matrix-free pair expectations match the dense operators") {
    const int n = 10;
    TwoPointOperator l2 = length_sq(n, 1.0);
    TwoPointOperator l = length(n, 1.0);
    StateSpec a{Eigenstate{1}};
    StateSpec b{Sphere{0, 2, 0.6, 0.0, -0.8}};
    CHECK(pair_expect_length_sq(a, b, n, 1.0) ==
          doctest::Approx(std::real(evaluate_pair(a, b, l2))).epsilon(1e-11));
    CHECK(pair_expect_length(a, b, n, 1.0) ==
          doctest::Approx(std::real(evaluate_pair(a, b, l))).epsilon(1e-11));
}

TEST_CASE("spectrum csv serialization") {
    auto rows = spectrum_L(16, 1.0, 2);
    std::string csv = spectrum_csv(rows, 16);
    CHECK(csv.find("level,analytic,numeric,multiplicity,gap,truncation,reliable") == 0);
    CHECK(csv.find("1.41421356237") != std::string::npos);
    CHECK(csv.find(",16,") != std::string::npos);
}

TEST_CASE("exchange symmetry of L^2") {
    const int n = 7;
    Matrix l2 = length_sq(n, 1.0).entries;
    Matrix swap = Matrix::Zero(n * n, n * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) swap(i * n + j, j * n + i) = 1.0;
    CHECK((swap * l2 - l2 * swap).norm() < 1e-12);
}
