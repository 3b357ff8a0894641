#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "becbell/correlation_measures.hpp"
#include "becbell/gaussian_core.hpp"
#include "becbell/oracles.hpp"

namespace {

using becbell::CovarianceMatrix;
using becbell::EpsilonBranch;
using becbell::Matrix;

CovarianceMatrix generic_state() {
    Matrix v(4, 4);
    v << 0.9, 0.1, 0.25, 0.05,
         0.1, 0.8, 0.0, -0.15,
         0.25, 0.0, 1.1, 0.2,
         0.05, -0.15, 0.2, 1.0;
    return CovarianceMatrix(std::move(v));
}

CovarianceMatrix product_of(const Matrix& first, const Matrix& second) {
    Matrix v = Matrix::Zero(4, 4);
    v.block<2, 2>(0, 0) = first;
    v.block<2, 2>(2, 2) = second;
    return CovarianceMatrix(std::move(v));
}

// Random local symplectic: an independent rotation and squeezer per mode.
Matrix random_local_symplectic(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> angle(0.0, 2.0 * 3.14159265358979323846);
    std::uniform_real_distribution<double> squeeze(-0.7, 0.7);
    Matrix s = Matrix::Zero(4, 4);
    for (int m = 0; m < 2; ++m) {
        const double th = angle(rng);
        const double r = squeeze(rng);
        Eigen::Matrix2d rot;
        rot << std::cos(th), std::sin(th), -std::sin(th), std::cos(th);
        Eigen::Matrix2d z = Eigen::Vector2d(std::exp(r), std::exp(-r)).asDiagonal();
        s.block<2, 2>(2 * m, 2 * m) = rot * z;
    }
    return s;
}

}  // namespace

TEST_CASE("product vacuum carries no correlations") {
    auto r = becbell::measure(CovarianceMatrix(0.5 * Matrix::Identity(4, 4)));
    CHECK(r.discord == 0.0);
    CHECK(r.log_negativity == 0.0);
    CHECK(r.s1 == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r.s2 == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r.s3 == doctest::Approx(0.0));
    CHECK(r.s4 == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r.lambda_plus == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r.lambda_minus == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r.eta_minus == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("product thermal states cancel to zero discord") {
    auto cm = product_of(1.5 * Matrix::Identity(2, 2), 1.5 * Matrix::Identity(2, 2));
    auto r = becbell::measure(cm);
    CHECK(r.discord < 1e-12);
    CHECK(r.log_negativity == 0.0);
    CHECK(r.conditional_purity == doctest::Approx(r.s2).epsilon(1e-12));
}

TEST_CASE("two-mode squeezed vacuum reproduces the analytic measures") {
    const struct {
        double r;
        double discord;
    } cases[] = {{0.1, 0.081159564840505205423},
                 {0.3, 0.45794979555220165848},
                 {0.5, 0.95138951389127862569},
                 {1.0, 2.3369093005458968512}};
    for (const auto& c : cases) {
        auto cm = becbell::oracles::make_tmsv(c.r);
        auto result = becbell::measure(cm);
        CHECK(result.discord == doctest::Approx(c.discord).epsilon(1e-12));
        CHECK(result.log_negativity == doctest::Approx(2.0 * c.r).epsilon(1e-10));
        CHECK(result.eta_minus == doctest::Approx(std::exp(-2.0 * c.r) / 2.0).epsilon(1e-12));
        // Symmetric state: the measured-mode switch cannot matter.
        CHECK(becbell::gaussian_discord(cm, 2) == doctest::Approx(c.discord).epsilon(1e-12));
    }
}

TEST_CASE("generic states match the frozen high-precision values") {
    auto cm = generic_state();
    CHECK(becbell::gaussian_discord(cm, 1) ==
          doctest::Approx(0.02598107767848481327).epsilon(1e-12));
    CHECK(becbell::gaussian_discord(cm, 2) ==
          doctest::Approx(0.02126301892750618398).epsilon(1e-12));

    Matrix v(4, 4);
    v << 1.0, 0.0, 0.5, 0.0,
         0.0, 1.0, 0.0, 0.0,
         0.5, 0.0, 0.8, 0.0,
         0.0, 0.0, 0.0, 0.8;
    CovarianceMatrix singular_cross(std::move(v));
    CHECK(becbell::gaussian_discord(singular_cross, 1) ==
          doctest::Approx(0.05797553053894036462).epsilon(1e-12));
    CHECK(becbell::gaussian_discord(singular_cross, 2) ==
          doctest::Approx(0.086146194813483667805).epsilon(1e-12));
}

TEST_CASE("random states agree with the high-precision route") {
    int branch1 = 0;
    int branch2 = 0;
    for (int seed = 0; seed < 500; ++seed) {
        auto cm = becbell::oracles::random_physical_cm(2, 50000 + seed);
        for (int mode : {1, 2}) {
            const double reference = becbell::oracles::highprec_discord(cm, mode);
            auto result = becbell::measure(cm, mode);
            CHECK(std::abs(result.discord - reference) < 1e-10);
            CHECK(result.discord >= 0.0);
            CHECK(result.log_negativity >= 0.0);
            CHECK(result.lambda_plus >= result.lambda_minus);
            CHECK(result.lambda_minus >= 1.0 - 1e-9);
            CHECK(result.eta_minus > 0.0);
            (result.eps_branch == EpsilonBranch::branch1 ? branch1 : branch2) += 1;
        }
    }
    // Both closed-form expressions must actually be exercised.
    CHECK(branch1 > 50);
    CHECK(branch2 > 50);
}

TEST_CASE("separable products have zero negativity and discord") {
    for (int seed = 0; seed < 20; ++seed) {
        auto first = becbell::oracles::random_physical_cm(1, 7000 + seed);
        auto second = becbell::oracles::random_physical_cm(1, 7100 + seed);
        auto cm = product_of(first.matrix(), second.matrix());
        auto r = becbell::measure(cm);
        CHECK(r.log_negativity == 0.0);
        CHECK(r.discord < 1e-10);
    }
}

TEST_CASE("both measures are invariant under local symplectics") {
    std::mt19937_64 rng(20240815);
    for (int trial = 0; trial < 20; ++trial) {
        auto cm = becbell::oracles::random_physical_cm(2, 80000 + trial);
        auto base = becbell::measure(cm);
        const Matrix s = random_local_symplectic(rng);
        CovarianceMatrix moved(s * cm.matrix() * s.transpose());
        auto shifted = becbell::measure(moved);
        CHECK(std::abs(shifted.discord - base.discord) < 1e-9);
        CHECK(std::abs(shifted.log_negativity - base.log_negativity) < 1e-9);
    }
}

TEST_CASE("discord is continuous across the branch boundary") {
    // Locate a pair of random states on opposite branches, then bisect the
    // branch predicate along their convex interpolation.
    auto on_branch = [](const CovarianceMatrix& cm) {
        return becbell::measure(cm).eps_branch;
    };
    int lo_seed = -1;
    int hi_seed = -1;
    for (int seed = 0; seed < 200 && (lo_seed < 0 || hi_seed < 0); ++seed) {
        auto branch = on_branch(becbell::oracles::random_physical_cm(2, 50000 + seed));
        if (branch == EpsilonBranch::branch1 && lo_seed < 0) lo_seed = seed;
        if (branch == EpsilonBranch::branch2 && hi_seed < 0) hi_seed = seed;
    }
    REQUIRE(lo_seed >= 0);
    REQUIRE(hi_seed >= 0);

    const Matrix a = becbell::oracles::random_physical_cm(2, 50000 + lo_seed).matrix();
    const Matrix b = becbell::oracles::random_physical_cm(2, 50000 + hi_seed).matrix();
    auto at = [&](double t) { return CovarianceMatrix((1.0 - t) * a + t * b); };

    double lo = 0.0;
    double hi = 1.0;
    const auto lo_branch = on_branch(at(lo));
    REQUIRE(lo_branch != on_branch(at(hi)));
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        (on_branch(at(mid)) == lo_branch ? lo : hi) = mid;
    }
    const double left = becbell::gaussian_discord(at(lo));
    const double right = becbell::gaussian_discord(at(hi));
    CHECK(becbell::measure(at(lo)).eps_branch != becbell::measure(at(hi)).eps_branch);
    CHECK(std::abs(left - right) < 1e-6);
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS(becbell::measure(CovarianceMatrix(0.5 * Matrix::Identity(6, 6))),
                    becbell::StructuralError);
    CHECK_THROWS_AS(becbell::measure(CovarianceMatrix(0.1 * Matrix::Identity(4, 4))),
                    becbell::DomainError);
    auto cm = generic_state();
    CHECK_THROWS_AS(becbell::measure(cm, 0), becbell::StructuralError);
    CHECK_THROWS_AS(becbell::measure(cm, 3), becbell::StructuralError);
}
