#include <doctest.h>

#include <cmath>

#include "becbell/gaussian_core.hpp"
#include "becbell/oracles.hpp"

using becbell::CovarianceMatrix;
using becbell::Matrix;
namespace oracles = becbell::oracles;

TEST_CASE("tmsv at zero squeezing is the vacuum") {
    auto cm = oracles::make_tmsv(0.0);
    CHECK((cm.matrix() - 0.5 * Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("tmsv blocks and purity") {
    auto cm = oracles::make_tmsv(0.5);
    CHECK(cm.matrix()(0, 0) == doctest::Approx(0.77154031740762188924).epsilon(1e-15));
    CHECK(cm.matrix()(0, 2) == doctest::Approx(0.58760059682190072844).epsilon(1e-15));
    CHECK(cm.matrix()(1, 3) == doctest::Approx(-0.58760059682190072844).epsilon(1e-15));
    CHECK(cm.matrix()(0, 1) == 0.0);
    REQUIRE(becbell::validate(cm).physical);
    auto nu = becbell::symplectic_eigenvalues(cm);
    CHECK(nu.values[0] == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(nu.values[1] == doctest::Approx(0.5).epsilon(1e-10));

    CHECK_THROWS_AS(oracles::make_tmsv(std::nan("")), becbell::StructuralError);
}

TEST_CASE("random covariance matrices are physical and reproducible") {
    for (int n = 1; n <= 4; ++n) {
        for (std::uint64_t seed = 1; seed <= 25; ++seed) {
            auto cm = oracles::random_physical_cm(n, 1000 * n + seed);
            CHECK(cm.n_modes() == n);
            auto report = becbell::validate(cm);
            CHECK(report.symmetric);
            CHECK(report.physical);
        }
    }
    auto a = oracles::random_physical_cm(2, 42);
    auto b = oracles::random_physical_cm(2, 42);
    auto c = oracles::random_physical_cm(2, 43);
    CHECK((a.matrix() - b.matrix()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.matrix() - c.matrix()).cwiseAbs().maxCoeff() > 1e-3);

    CHECK_THROWS_AS(oracles::random_physical_cm(0, 1), becbell::StructuralError);
}

TEST_CASE("high-precision discord of two-mode squeezed vacuum") {
    struct Ref { double r, d; };
    const Ref refs[] = {
        {0.1, 0.081159564840505205423},
        {0.3, 0.45794979555220165848},
        {0.5, 0.95138951389127862569},
        {1.0, 2.3369093005458968512},
    };
    for (const auto& ref : refs) {
        auto cm = oracles::make_tmsv(ref.r);
        CHECK(oracles::highprec_discord(cm, 1) == doctest::Approx(ref.d).epsilon(1e-12));
        CHECK(oracles::highprec_discord(cm, 2) == doctest::Approx(ref.d).epsilon(1e-12));
    }
}

TEST_CASE("high-precision discord vanishes for product states") {
    Matrix v = Matrix::Zero(4, 4);

    SUBCASE("thermal times thermal") {
        v.diagonal() << 1.3, 1.3, 0.9, 0.9;
    }
    SUBCASE("vacuum times thermal") {
        v.diagonal() << 0.5, 0.5, 2.1, 2.1;
    }
    SUBCASE("thermal times vacuum") {
        v.diagonal() << 2.1, 2.1, 0.5, 0.5;
    }
    CHECK(std::abs(oracles::highprec_discord(CovarianceMatrix(v), 1)) < 1e-30);
    CHECK(std::abs(oracles::highprec_discord(CovarianceMatrix(v), 2)) < 1e-30);
}

TEST_CASE("high-precision discord of a generic correlated state") {
    Matrix v(4, 4);
    v << 0.9, 0.1, 0.25, 0.05,
         0.1, 0.8, 0.0, -0.15,
         0.25, 0.0, 1.1, 0.2,
         0.05, -0.15, 0.2, 1.0;
    CovarianceMatrix cm(v);
    REQUIRE(becbell::validate(cm).physical);
    CHECK(oracles::highprec_discord(cm, 1) ==
          doctest::Approx(0.02598107767848481327).epsilon(1e-13));
    CHECK(oracles::highprec_discord(cm, 2) ==
          doctest::Approx(0.02126301892750618398).epsilon(1e-13));
}

TEST_CASE("high-precision discord with singular cross block") {
    Matrix v(4, 4);
    v << 1.0, 0.0, 0.5, 0.0,
         0.0, 1.0, 0.0, 0.0,
         0.5, 0.0, 0.8, 0.0,
         0.0, 0.0, 0.0, 0.8;
    CovarianceMatrix cm(v);
    REQUIRE(becbell::validate(cm).physical);
    CHECK(oracles::highprec_discord(cm, 1) ==
          doctest::Approx(0.05797553053894036462).epsilon(1e-13));
    CHECK(oracles::highprec_discord(cm, 2) ==
          doctest::Approx(0.086146194813483667805).epsilon(1e-13));
}

TEST_CASE("high-precision discord input validation") {
    CHECK_THROWS_AS(oracles::highprec_discord(CovarianceMatrix(Matrix::Identity(6, 6)), 1),
                    becbell::StructuralError);
    CHECK_THROWS_AS(oracles::highprec_discord(oracles::make_tmsv(0.2), 0),
                    becbell::StructuralError);
    CHECK_THROWS_AS(oracles::highprec_discord(oracles::make_tmsv(0.2), 3),
                    becbell::StructuralError);
}
