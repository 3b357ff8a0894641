#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "becbell/csv_writer.hpp"
#include "becbell/errors.hpp"
#include "becbell/node_model.hpp"
#include "becbell/run_config.hpp"
#include "becbell/sweep_engine.hpp"
#include "becbell/validation.hpp"

namespace {

using becbell::RunConfig;
using json = nlohmann::ordered_json;

RunConfig select_config(const std::string& config_path, const std::string& preset) {
    if (!preset.empty()) return becbell::preset_config(preset);
    if (!config_path.empty()) return becbell::load_run_config(config_path);
    return becbell::parse_run_config("{}");
}

void print_node_report(const char* label, const becbell::NodeParams& params) {
    const becbell::DerivedNode node = becbell::derive_node(params);
    const bool stable = becbell::is_stable(becbell::build_linear_model(node));
    std::printf("node %s:\n", label);
    std::printf("  kappa_per_s:            %.10g\n", node.kappa);
    std::printf("  bec_detuning_per_s:     %.10g\n", node.bec_detuning);
    std::printf("  bogoliubov_freq_per_s:  %.10g\n", node.bogoliubov_freq);
    std::printf("  swave_freq_per_s:       %.10g\n", node.swave_freq);
    std::printf("  thermal_occupation:     %.10g\n", node.thermal_occupation);
    std::printf("  detuning_per_s:         %.10g\n", node.detuning);
    std::printf("  coupling_per_s:         %.10g\n", node.coupling);
    std::printf("  bec_damping_per_s:      %.10g\n", node.bec_damping);
    std::printf("  drive_per_s:            %.10g\n", node.drive);
    std::printf("  alpha_s:                %.10g\n", node.alpha_s);
    std::printf("  q_s:                    %.10g\n", node.q_s);
    std::printf("  p_s:                    %.10g\n", node.p_s);
    std::printf("  stable:                 %s\n", stable ? "yes" : "no");
}

int cmd_derive(const RunConfig& config) {
    print_node_report("a", config.sweep.base.node_a);
    print_node_report("b", config.sweep.base.node_b);
    const bool stable_a = becbell::is_stable(
            becbell::build_linear_model(becbell::derive_node(config.sweep.base.node_a)));
    const bool stable_b = becbell::is_stable(
            becbell::build_linear_model(becbell::derive_node(config.sweep.base.node_b)));
    return (stable_a && stable_b) ? 0 : 2;
}

int cmd_point(const RunConfig& config) {
    const becbell::SweepPoint point = becbell::evaluate_point(config.sweep.base, {}, {});
    json record = json::object();
    if (point.error_code == 0) {
        record["discord"] = point.measures.discord;
        record["log_negativity"] = point.measures.log_negativity;
        record["s1"] = point.measures.s1;
        record["s2"] = point.measures.s2;
        record["s3"] = point.measures.s3;
        record["s4"] = point.measures.s4;
        record["lambda_plus"] = point.measures.lambda_plus;
        record["lambda_minus"] = point.measures.lambda_minus;
        record["eta_minus"] = point.measures.eta_minus;
        record["conditional_purity"] = point.measures.conditional_purity;
        record["epsilon_branch"] =
                point.measures.eps_branch == becbell::EpsilonBranch::branch1 ? 1 : 2;
    }
    record["stable"] = point.stable;
    record["error_code"] = point.error_code;
    std::cout << record.dump(2) << "\n";
    return point.error_code;
}

int cmd_sweep(const RunConfig& config, const std::string& out_path, int workers) {
    const becbell::SweepResult result = becbell::run_sweep(config.sweep, workers);
    const std::string csv = becbell::sweep_to_csv(result, config);
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw becbell::StructuralError("sweep: cannot open " + out_path + " for writing");
    out << csv;
    out.close();
    std::size_t failed = 0;
    for (const auto& point : result.points) {
        if (point.error_code != 0) ++failed;
    }
    std::printf("wrote %s: %zu points, %zu failed\n", out_path.c_str(), result.points.size(),
                failed);
    return 0;
}

int cmd_validate(double tol_scale, bool flip_cross_yy) {
    becbell::SuiteOptions options;
    options.tol_scale = tol_scale;
    options.mutation = flip_cross_yy ? becbell::KernelMutation::flip_cross_yy
                                     : becbell::KernelMutation::none;
    bool all_passed = true;
    for (const becbell::SuiteResult& suite : becbell::run_validation_suites(options)) {
        std::printf("%s %-22s worst %.3e threshold %.3e%s%s\n", suite.passed ? "PASS" : "FAIL",
                    suite.name.c_str(), suite.worst, suite.threshold,
                    suite.detail.empty() ? "" : " at ", suite.detail.c_str());
        all_passed = all_passed && suite.passed;
    }
    return all_passed ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-node filtered covariance pipeline"};
    app.require_subcommand(1);

    std::string config_path;
    std::string preset;
    std::string out_path = "sweep.csv";
    double tol = 0.0;
    double tol_scale = 1.0;
    int workers = 1;
    bool flip_cross_yy = false;

    CLI::App* derive = app.add_subcommand("derive", "Report derived node quantities");
    derive->add_option("--config", config_path, "JSON configuration file");

    CLI::App* point = app.add_subcommand("point", "Evaluate a single operating point");
    point->add_option("--config", config_path, "JSON configuration file");
    CLI::Option* point_tol = point->add_option("--tol", tol, "Override solver tolerance");

    CLI::App* sweep = app.add_subcommand("sweep", "Run a grid sweep and write CSV");
    CLI::Option* sweep_config = sweep->add_option("--config", config_path, "JSON configuration file");
    sweep->add_option("--preset", preset, "Built-in configuration (fig2..fig6)")
            ->excludes(sweep_config);
    sweep->add_option("--out", out_path, "Output CSV path");
    sweep->add_option("--workers", workers, "Worker thread count");
    CLI::Option* sweep_tol = sweep->add_option("--tol", tol, "Override solver tolerance");

    CLI::App* validate = app.add_subcommand("validate", "Run cross-check suites");
    validate->add_option("--tol", tol_scale, "Scale factor on suite thresholds");
    validate->add_flag("--inject-k-sign-flip", flip_cross_yy)->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& help) {
        return app.exit(help);
    } catch (const CLI::ParseError& error) {
        app.exit(error);
        return 1;
    }

    try {
        if (derive->parsed()) return cmd_derive(select_config(config_path, preset));
        if (point->parsed()) {
            RunConfig config = select_config(config_path, preset);
            if (point_tol->count() > 0) config.sweep.base.solver_tol = tol;
            return cmd_point(config);
        }
        if (sweep->parsed()) {
            RunConfig config = select_config(config_path, preset);
            if (sweep_tol->count() > 0) config.sweep.base.solver_tol = tol;
            return cmd_sweep(config, out_path, workers);
        }
        if (validate->parsed()) return cmd_validate(tol_scale, flip_cross_yy);
    } catch (const becbell::StructuralError& error) {
        std::cerr << "error: " << error.what() << "\n";
        return 1;
    } catch (const becbell::DomainError& error) {
        std::cerr << "error: " << error.what() << "\n";
        return 2;
    } catch (const becbell::NumericalError& error) {
        std::cerr << "error: " << error.what()
                  << " (achieved tolerance " << error.achieved_tolerance << ")\n";
        return 3;
    } catch (const std::exception& error) {
        std::cerr << "error: " << error.what() << "\n";
        return 1;
    }
    return 0;
}
