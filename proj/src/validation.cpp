#include "becbell/validation.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "becbell/correlation_measures.hpp"
#include "becbell/node_model.hpp"
#include "becbell/oracles.hpp"
#include "becbell/spectral_solver.hpp"

namespace becbell {
namespace {

std::string format_entry(int row, int col) {
    std::ostringstream out;
    out << "entry (" << row << "," << col << ")";
    return out.str();
}

SuiteResult calibration_suite(double tol_scale) {
    SuiteResult suite;
    suite.name = "calibration_decoupled";
    suite.threshold = 1e-6 * tol_scale;
    NodeParams params;
    params.coupling_omega_b = 0.0;
    const DerivedNode node = derive_node(params);
    const LinearModel model = build_linear_model(node);
    Eigen::Vector4d expected;
    expected << node.thermal_occupation + 0.5, node.thermal_occupation + 0.5, 0.5, 0.5;
    for (int i = 0; i < 5; ++i) {
        const double center_ratio = -2.0 + 0.5 * i;
        for (int j = 0; j < 5; ++j) {
            const double epsilon = 0.5 + (30.0 - 0.5) * j / 4.0;
            // A zero-frequency filter has no carrier to scale the bandwidth
            // by; fall back to the Bogoliubov frequency for tau.
            const double omega = center_ratio * node.bogoliubov_freq;
            const double tau = epsilon / (omega == 0.0 ? node.bogoliubov_freq : std::abs(omega));
            const NodeCM result = filtered_node_cm(model, FilterSpec{omega, tau}, 1e-8);
            const Eigen::Matrix4d diff =
                    result.cm.matrix() - Eigen::Matrix4d(expected.asDiagonal());
            for (int r = 0; r < 4; ++r) {
                for (int c = 0; c < 4; ++c) {
                    if (std::abs(diff(r, c)) > suite.worst) {
                        suite.worst = std::abs(diff(r, c));
                        std::ostringstream detail;
                        detail << "center " << center_ratio << " omega_B, epsilon " << epsilon
                               << ", " << format_entry(r, c);
                        suite.detail = detail.str();
                    }
                }
            }
        }
    }
    suite.passed = suite.worst <= suite.threshold;
    return suite;
}

NodeParams random_stable_params(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> log_factor(std::log(0.25), std::log(4.0));
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    for (int attempt = 0; attempt < 500; ++attempt) {
        NodeParams params;
        params.drive_amplitude_kappa *= std::exp(log_factor(rng));
        params.bec_damping_kappa *= std::exp(log_factor(rng));
        params.coupling_omega_b *= std::exp(log_factor(rng));
        params.swave_frequency_recoil = 10.0 * uniform(rng);
        params.detuning_omega_c = 0.5 + 1.5 * uniform(rng);
        params.condensate_temperature_k *= std::exp(log_factor(rng));
        if (is_stable(build_linear_model(derive_node(params)))) return params;
    }
    throw NumericalError("validation: no stable random model found", 0.0);
}

SuiteResult lyapunov_suite(double tol_scale) {
    constexpr double kSolverTol = 1e-8;
    SuiteResult suite;
    suite.name = "lyapunov_integral";
    suite.threshold = 10.0 * kSolverTol * tol_scale;
    std::mt19937_64 rng(7001);
    for (int trial = 0; trial < 50; ++trial) {
        const LinearModel model = build_linear_model(derive_node(random_stable_params(rng)));
        const Eigen::Matrix4d direct = lyapunov_steady_cm(model).matrix();
        const Eigen::Matrix4d integral = unfiltered_frequency_cm(model, kSolverTol).matrix();
        const Eigen::Matrix4d diff = integral - direct;
        for (int r = 0; r < 4; ++r) {
            for (int c = 0; c < 4; ++c) {
                if (std::abs(diff(r, c)) > suite.worst) {
                    suite.worst = std::abs(diff(r, c));
                    std::ostringstream detail;
                    detail << "model " << trial << ", " << format_entry(r, c);
                    suite.detail = detail.str();
                }
            }
        }
    }
    suite.passed = suite.worst <= suite.threshold;
    return suite;
}

SuiteResult bell_oracle_suite(double tol_scale, KernelMutation mutation) {
    SuiteResult suite;
    suite.name = "bell_oracle";
    suite.threshold = 1e-9 * tol_scale;
    std::mt19937_64 rng(4242);
    std::uniform_real_distribution<double> trans(0.1, 0.9);
    std::uniform_real_distribution<double> eff(0.3, 1.0);
    std::vector<BellConfig> configs;
    for (int k = 0; k < 20; ++k) {
        configs.push_back(BellConfig{trans(rng), eff(rng), eff(rng)});
    }
    int failures = 0;
    int route_errors = 0;
    std::string first_route_error;
    for (int state_index = 0; state_index < 200; ++state_index) {
        const TwoNodeState state =
                TwoNodeState::from_cm(oracles::random_physical_cm(4, 9000 + state_index));
        for (std::size_t config_index = 0; config_index < configs.size(); ++config_index) {
            Eigen::Matrix4d kernel;
            try {
                kernel = bell_condition(state, configs[config_index], mutation).matrix();
            } catch (const std::exception& error) {
                // A conditioning route that cannot even produce a physical
                // covariance counts as a failed comparison, not a crash.
                ++failures;
                if (route_errors++ == 0) {
                    first_route_error = "state " + std::to_string(state_index) + ", config " +
                                        std::to_string(config_index) + ": " + error.what();
                }
                continue;
            }
            const Eigen::Matrix4d reference =
                    general_dyne_oracle(state, configs[config_index]).matrix();
            const Eigen::Matrix4d diff = kernel - reference;
            double local_worst = 0.0;
            for (int r = 0; r < 4; ++r) {
                for (int c = 0; c < 4; ++c) {
                    if (std::abs(diff(r, c)) > local_worst) local_worst = std::abs(diff(r, c));
                    if (std::abs(diff(r, c)) > suite.worst) {
                        suite.worst = std::abs(diff(r, c));
                        std::ostringstream detail;
                        detail << "state " << state_index << ", config " << config_index << " (T="
                               << configs[config_index].transmissivity << ", eta1="
                               << configs[config_index].eta1 << ", eta2="
                               << configs[config_index].eta2 << "), " << format_entry(r, c);
                        suite.detail = detail.str();
                    }
                }
            }
            if (local_worst > suite.threshold) ++failures;
        }
    }
    if (suite.detail.empty()) suite.detail = first_route_error;
    if (failures > 0) {
        suite.detail += ", " + std::to_string(failures) + "/4000 comparisons above threshold";
        if (route_errors > 0) {
            suite.detail += " (" + std::to_string(route_errors) + " raised errors, first: " +
                            first_route_error + ")";
        }
    }
    suite.passed = suite.worst <= suite.threshold && route_errors == 0;
    return suite;
}

SuiteResult measures_suite(double tol_scale) {
    SuiteResult suite;
    suite.name = "measures_reference";
    suite.threshold = 1e-10 * tol_scale;
    auto record = [&suite](double deviation, const std::string& what) {
        if (deviation > suite.worst) {
            suite.worst = deviation;
            suite.detail = what;
        }
    };
    for (const double r : {0.1, 0.3, 0.5, 1.0}) {
        const CovarianceMatrix cm = oracles::make_tmsv(r);
        const MeasureResult result = measure(cm);
        record(std::abs(result.log_negativity - 2.0 * r),
               "tmsv r=" + std::to_string(r) + " log negativity vs 2r");
        record(std::abs(result.discord - oracles::highprec_discord(cm)),
               "tmsv r=" + std::to_string(r) + " discord vs 50-digit route");
    }
    for (int seed = 0; seed < 50; ++seed) {
        const CovarianceMatrix cm = oracles::random_physical_cm(2, 61000 + seed);
        for (int mode : {1, 2}) {
            record(std::abs(gaussian_discord(cm, mode) - oracles::highprec_discord(cm, mode)),
                   "random cm seed " + std::to_string(61000 + seed) + " mode " +
                           std::to_string(mode) + " discord vs 50-digit route");
        }
    }
    for (const double occupation : {0.0, 0.35, 1.7}) {
        Eigen::Matrix4d product = Eigen::Matrix4d::Identity() * 0.5;
        product(0, 0) = product(1, 1) = occupation + 0.5;
        const MeasureResult result = measure(CovarianceMatrix(product));
        record(result.discord, "product state discord, occupation " + std::to_string(occupation));
        record(result.log_negativity,
               "product state log negativity, occupation " + std::to_string(occupation));
    }
    suite.passed = suite.worst <= suite.threshold;
    return suite;
}

}  // namespace

std::vector<SuiteResult> run_validation_suites(const SuiteOptions& options) {
    return {
            calibration_suite(options.tol_scale),
            lyapunov_suite(options.tol_scale),
            bell_oracle_suite(options.tol_scale, options.mutation),
            measures_suite(options.tol_scale),
    };
}

}  // namespace becbell
