#ifndef BECBELL_SWEEP_ENGINE_HPP
#define BECBELL_SWEEP_ENGINE_HPP

#include <array>
#include <optional>
#include <vector>

#include "becbell/bell_detection.hpp"
#include "becbell/correlation_measures.hpp"
#include "becbell/node_model.hpp"

namespace becbell {

// Sweepable knobs. Filter centers are in units of the node's own Bogoliubov
// frequency; epsilon is the dimensionless bandwidth parameter |center| * tau.
// Axes without a node index drive both nodes together.
enum class SweepAxis {
    epsilon1,
    epsilon2,
    omega1_ratio,
    omega2_ratio,
    eta,  // locks eta1 = eta2
    swave_ratio,
    transmissivity,
    coupling_ratio,
    drive_ratio,
};

struct AxisSpec {
    SweepAxis axis = SweepAxis::epsilon1;
    double min = 0.0;
    double max = 0.0;
    int count = 0;
};

// Fully resolved pipeline configuration for one grid point evaluation.
// Absolute filter centers override the omega_B-relative ones when set; the
// collision sweeps pin them (together with the nodes' absolute detuning and
// coupling) to the collisionless operating point.
struct PipelineConfig {
    NodeParams node_a;
    NodeParams node_b;
    double filter_center_a_omega_b = -1.0;  // Omega_1 / omega_B
    double filter_center_b_omega_b = -1.0;
    std::optional<double> filter_center_a_per_s;
    std::optional<double> filter_center_b_per_s;
    double epsilon_a = 8.0;
    double epsilon_b = 8.0;
    BellConfig bell;
    double solver_tol = 1e-8;
    int measured_mode = 1;
    DiffusionConvention convention = DiffusionConvention::vacuum_half;
};

struct SweepSpec {
    PipelineConfig base;
    std::vector<AxisSpec> axes;  // one or two
};

// error_code uses the process exit-code scheme: 0 ok, 2 domain failure
// (instability, degenerate conditioning, out-of-domain knob), 3 numerical
// failure (quadrature or conditioning tolerance not met).
struct SweepPoint {
    std::array<double, 2> coords = {0.0, 0.0};
    MeasureResult measures;
    bool stable = false;
    int error_code = 0;
};

struct SweepResult {
    SweepSpec spec;
    std::vector<std::vector<double>> axis_values;  // per axis, length count
    std::vector<SweepPoint> points;                // row-major, first axis outer
};

/// Evaluates a grid point with explicit axis values substituted into the
/// base configuration; with no axes the base configuration is evaluated
/// as-is. Building block of run_sweep, exposed for single-point evaluation
/// and tests.
SweepPoint evaluate_point(const PipelineConfig& base, const std::vector<AxisSpec>& axes,
                          const std::vector<double>& values);

/// Runs the full grid. Node spectra are solved once per distinct
/// (node, filter) combination; output is independent of worker count.
SweepResult run_sweep(const SweepSpec& spec, int workers = 1);

}  // namespace becbell

#endif
