#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "becbell/node_model.hpp"
#include "becbell/spectral_solver.hpp"

using becbell::FilterSpec;
using becbell::LinearModel;
using becbell::NodeParams;

namespace {

LinearModel reference_model() {
    return becbell::build_linear_model(becbell::derive_node(NodeParams{}));
}

LinearModel decoupled_model() {
    NodeParams params;
    params.coupling_omega_b = 0.0;
    return becbell::build_linear_model(becbell::derive_node(params));
}

// Local vectorized Lyapunov solve used only to cross-check stability.
Eigen::Matrix4d solve_lyapunov_raw(const Eigen::Matrix4d& a, const Eigen::Matrix4d& d) {
    Eigen::Matrix<double, 16, 16> coeff = Eigen::Matrix<double, 16, 16>::Zero();
    Eigen::Matrix<double, 16, 1> rhs;
    for (int col = 0; col < 4; ++col) {
        for (int row = 0; row < 4; ++row) {
            const int idx = 4 * col + row;
            rhs(idx) = -d(row, col);
            for (int k = 0; k < 4; ++k) {
                coeff(idx, 4 * col + k) += a(row, k);
                coeff(idx, 4 * k + row) += a(col, k);
            }
        }
    }
    const Eigen::Matrix<double, 16, 1> sol = coeff.partialPivLu().solve(rhs);
    Eigen::Matrix4d v;
    for (int col = 0; col < 4; ++col) {
        for (int row = 0; row < 4; ++row) v(row, col) = sol(4 * col + row);
    }
    return 0.5 * (v + v.transpose());
}

}  // namespace

TEST_CASE("filter resolution product") {
    FilterSpec f{-10.0, 2.0};
    CHECK(f.epsilon() == 20.0);
    CHECK(FilterSpec{0.0, 3.0}.epsilon() == 0.0);
}

TEST_CASE("input validation") {
    auto model = reference_model();
    CHECK_THROWS_AS(becbell::filtered_node_cm(model, FilterSpec{1.0, 0.0}, 1e-8),
                    becbell::DomainError);
    CHECK_THROWS_AS(becbell::filtered_node_cm(model, FilterSpec{1.0, -1.0}, 1e-8),
                    becbell::DomainError);
    CHECK_THROWS_AS(becbell::filtered_node_cm(model, FilterSpec{1.0, 1.0}, 0.0),
                    becbell::DomainError);
    CHECK_THROWS_AS(becbell::unfiltered_frequency_cm(model, -1e-8), becbell::DomainError);

    LinearModel unstable;
    unstable.a = Eigen::Matrix4d::Identity();
    unstable.d_diag.setOnes();
    unstable.kappa = 1.0;
    CHECK_THROWS_AS(becbell::filtered_node_cm(unstable, FilterSpec{1.0, 1.0}, 1e-8),
                    becbell::DomainError);
    CHECK_THROWS_AS(becbell::lyapunov_steady_cm(unstable), becbell::DomainError);
    CHECK_THROWS_AS(becbell::unfiltered_frequency_cm(unstable, 1e-8), becbell::DomainError);
}

TEST_CASE("steady solve balances isotropic damping") {
    LinearModel model;
    model.a = -Eigen::Matrix4d::Identity();
    model.d_diag.setOnes();
    model.kappa = 1.0;
    auto v = becbell::lyapunov_steady_cm(model);
    CHECK((v.matrix() - 0.5 * becbell::Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("decoupled steady state is thermal times vacuum") {
    NodeParams params;
    params.coupling_omega_b = 0.0;
    auto node = becbell::derive_node(params);
    auto v = becbell::lyapunov_steady_cm(becbell::build_linear_model(node));
    const double nu = node.thermal_occupation + 0.5;
    becbell::Matrix expected = becbell::Matrix::Zero(4, 4);
    expected.diagonal() << nu, nu, 0.5, 0.5;
    CHECK((v.matrix() - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("steady solve residual on random stable systems") {
    std::mt19937_64 rng(90210);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        Eigen::Matrix4d raw;
        for (int i = 0; i < 16; ++i) raw(i / 4, i % 4) = unif(rng);
        const double shift =
            Eigen::EigenSolver<Eigen::Matrix4d>(raw, false).eigenvalues().real().maxCoeff();
        LinearModel model;
        model.a = raw - (shift + 0.5) * Eigen::Matrix4d::Identity();
        for (int i = 0; i < 4; ++i) model.d_diag(i) = 0.1 + std::abs(unif(rng));
        model.kappa = 1.0;
        REQUIRE(becbell::is_stable(model));

        auto v = becbell::lyapunov_steady_cm(model);
        const Eigen::Matrix4d d = model.d_diag.asDiagonal();
        const double residual =
            (model.a * v.matrix() + v.matrix() * model.a.transpose() + d).cwiseAbs().maxCoeff();
        CHECK(residual < 1e-10 * d.norm());
    }
}

TEST_CASE("stability matches positive definiteness of the steady solution") {
    std::mt19937_64 rng(41799);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    int stable_seen = 0;
    int unstable_seen = 0;
    for (int trial = 0; trial < 200 && (stable_seen < 30 || unstable_seen < 30); ++trial) {
        Eigen::Matrix4d raw;
        for (int i = 0; i < 16; ++i) raw(i / 4, i % 4) = unif(rng);
        const auto eigs = Eigen::EigenSolver<Eigen::Matrix4d>(raw, false).eigenvalues();
        const double max_re = eigs.real().maxCoeff();
        // Shift the spectral abscissa to -0.5 or +0.5 so both verdicts occur.
        raw -= (max_re + (trial % 2 == 0 ? 0.5 : -0.5)) * Eigen::Matrix4d::Identity();

        LinearModel model;
        model.a = raw;
        model.d_diag.setOnes();
        model.kappa = 1.0;
        const Eigen::Matrix4d v = solve_lyapunov_raw(raw, Eigen::Matrix4d::Identity());
        if ((raw * v + v * raw.transpose() + Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff() >
            1e-8) {
            continue;  // resonant pair, vectorized system singular
        }
        const double min_eig =
            Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d>(v, Eigen::EigenvaluesOnly)
                .eigenvalues()
                .minCoeff();
        if (becbell::is_stable(model)) {
            CHECK(min_eig > 0.0);
            ++stable_seen;
        } else {
            CHECK(min_eig < 0.0);
            ++unstable_seen;
        }
    }
    CHECK(stable_seen >= 30);
    CHECK(unstable_seen >= 30);
}

TEST_CASE("frequency integral agrees with the direct steady solve") {
    for (double coupling : {0.0, 0.25, 0.5, 0.75}) {
        NodeParams params;
        params.coupling_omega_b = coupling;
        auto model = becbell::build_linear_model(becbell::derive_node(params));
        auto via_freq = becbell::unfiltered_frequency_cm(model, 1e-8);
        auto via_lyap = becbell::lyapunov_steady_cm(model);
        CHECK((via_freq.matrix() - via_lyap.matrix()).cwiseAbs().maxCoeff() < 1e-7);
    }
}

TEST_CASE("decoupled cavity emits exact vacuum through every filter") {
    NodeParams params;
    params.coupling_omega_b = 0.0;
    auto node = becbell::derive_node(params);
    auto model = becbell::build_linear_model(node);
    const double nu = node.thermal_occupation + 0.5;

    for (double ratio : {-2.0, -1.0, 0.0, 0.9, 1.7}) {
        for (double tau_kappa : {0.05, 1.0, 20.0, 300.0, 2700.0}) {
            FilterSpec filter{ratio * node.bogoliubov_freq, tau_kappa / node.kappa};
            auto result = becbell::filtered_node_cm(model, filter, 1e-8);
            const auto& m = result.cm.matrix();
            CHECK((m.block<2, 2>(2, 2) - 0.5 * Eigen::Matrix2d::Identity())
                      .cwiseAbs()
                      .maxCoeff() < 1e-6);
            CHECK((m.block<2, 2>(0, 0) - nu * Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() <
                  1e-6);
            CHECK(m.block<2, 2>(0, 2).cwiseAbs().maxCoeff() < 1e-6);
            CHECK(result.quadrature_error_estimate <= 1e-8);
        }
    }
}

TEST_CASE("reference operating point produces correlated output") {
    auto node = becbell::derive_node(NodeParams{});
    auto model = becbell::build_linear_model(node);
    FilterSpec filter{-node.bogoliubov_freq, 8.0 / node.bogoliubov_freq};
    auto result = becbell::filtered_node_cm(model, filter, 1e-8);

    CHECK(result.cm.matrix().block<2, 2>(0, 2).cwiseAbs().maxCoeff() > 0.3);
    CHECK(becbell::validate(result.cm).physical);
    CHECK(result.quadrature_error_estimate <= 1e-8);

    // The condensate block is untouched by the output filter and must match
    // the intracavity steady state.
    auto lyap = becbell::lyapunov_steady_cm(model);
    CHECK((result.cm.matrix().block<2, 2>(0, 0) - lyap.matrix().block<2, 2>(0, 0))
              .cwiseAbs()
              .maxCoeff() < 1e-7);
}

TEST_CASE("lower sideband carries the condensate correlations") {
    auto node = becbell::derive_node(NodeParams{});
    auto model = becbell::build_linear_model(node);
    const double tau = 8.0 / node.bogoliubov_freq;
    auto lower = becbell::filtered_node_cm(model, FilterSpec{-node.bogoliubov_freq, tau}, 1e-8);
    auto upper = becbell::filtered_node_cm(model, FilterSpec{node.bogoliubov_freq, tau}, 1e-8);
    const double low_corr = lower.cm.matrix().block<2, 2>(0, 2).cwiseAbs().maxCoeff();
    const double up_corr = upper.cm.matrix().block<2, 2>(0, 2).cwiseAbs().maxCoeff();
    CHECK(low_corr > 3.0 * up_corr);
}

TEST_CASE("broadband filter recovers the bare output") {
    auto node = becbell::derive_node(NodeParams{});
    auto model = becbell::build_linear_model(node);
    FilterSpec wide{-node.bogoliubov_freq, 1e-3 / node.kappa};
    FilterSpec wider{-node.bogoliubov_freq, 1e-4 / node.kappa};
    auto va = becbell::filtered_node_cm(model, wide, 1e-8);
    auto vb = becbell::filtered_node_cm(model, wider, 1e-8);
    CHECK((va.cm.matrix().block<2, 2>(2, 2) - vb.cm.matrix().block<2, 2>(2, 2))
              .cwiseAbs()
              .maxCoeff() < 1e-3);
    CHECK((vb.cm.matrix().block<2, 2>(2, 2) - 0.5 * Eigen::Matrix2d::Identity())
              .cwiseAbs()
              .maxCoeff() < 1e-3);
}

TEST_CASE("halving the tolerance moves entries less than the reported estimate") {
    auto node = becbell::derive_node(NodeParams{});
    auto model = becbell::build_linear_model(node);
    FilterSpec filter{-node.bogoliubov_freq, 8.0 / node.bogoliubov_freq};
    auto coarse = becbell::filtered_node_cm(model, filter, 1e-8);
    auto fine = becbell::filtered_node_cm(model, filter, 5e-9);
    CHECK((coarse.cm.matrix() - fine.cm.matrix()).cwiseAbs().maxCoeff() <=
          coarse.quadrature_error_estimate);
}

TEST_CASE("covariance entries respond continuously to parameter nudges") {
    NodeParams base;
    base.swave_frequency_recoil = 2.0;
    auto eval = [](const NodeParams& params, double eps_scale) {
        auto node = becbell::derive_node(params);
        FilterSpec filter{-node.bogoliubov_freq, eps_scale * 8.0 / node.bogoliubov_freq};
        return becbell::filtered_node_cm(becbell::build_linear_model(node), filter, 1e-8)
            .cm.matrix();
    };
    const becbell::Matrix v0 = eval(base, 1.0);
    const double scale = std::max(1.0, v0.cwiseAbs().maxCoeff());

    auto check_nudge = [&](auto&& mutate) {
        NodeParams params = base;
        mutate(params);
        CHECK((eval(params, 1.0) - v0).cwiseAbs().maxCoeff() < 0.05 * scale);
    };
    check_nudge([](NodeParams& p) { p.coupling_omega_b *= 1.01; });
    check_nudge([](NodeParams& p) { p.bec_damping_kappa *= 1.01; });
    check_nudge([](NodeParams& p) { p.detuning_omega_c *= 1.01; });
    check_nudge([](NodeParams& p) { p.swave_frequency_recoil *= 1.01; });
    check_nudge([](NodeParams& p) { p.condensate_temperature_k *= 1.01; });
    check_nudge([](NodeParams& p) { p.drive_amplitude_kappa *= 1.01; });
    CHECK((eval(base, 1.01) - v0).cwiseAbs().maxCoeff() < 0.05 * scale);
}

TEST_CASE("filtered covariance of the decoupled model is reproducible") {
    auto model = decoupled_model();
    FilterSpec filter{-1000.0, 1e-4};
    auto a = becbell::filtered_node_cm(model, filter, 1e-8);
    auto b = becbell::filtered_node_cm(model, filter, 1e-8);
    CHECK((a.cm.matrix() - b.cm.matrix()).cwiseAbs().maxCoeff() == 0.0);
}
