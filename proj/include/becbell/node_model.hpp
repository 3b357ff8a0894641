#ifndef BECBELL_NODE_MODEL_HPP
#define BECBELL_NODE_MODEL_HPP

#include <optional>

#include <Eigen/Dense>

#include "becbell/errors.hpp"

namespace becbell {

// Physical knobs for a single cavity-condensate node. Rates are angular
// frequencies [rad/s]; ratio-valued fields are resolved by derive_node.
struct NodeParams {
    double cavity_length_m = 1e-3;
    double wavelength_m = 1046e-9;
    double finesse = 1.15e5;
    std::optional<double> kappa_per_s;        // overrides finesse when set
    double drive_amplitude_kappa = 3.0;       // E_d / kappa
    std::optional<double> drive_power_w;      // overrides the ratio when set
    double detuning_omega_c = 1.0;            // Delta / Omega_c, any sign
    std::optional<double> detuning_per_s;     // overrides the ratio when set
    double recoil_omega_per_s = 2.0 * 3.14159265358979323846 * 3570.0;
    double swave_frequency_recoil = 0.0;      // omega_sw / omega_R, >= 0
    double bec_damping_kappa = 1e-3;          // gamma_c / kappa
    double coupling_omega_b = 0.5;            // G / omega_B, >= 0
    std::optional<double> coupling_per_s;     // overrides the ratio when set
    double condensate_temperature_k = 1e-7;
};

// Microscopic inputs for the optional second coupling route.
struct AtomicParams {
    double atom_number = 0.0;
    double atomic_detuning_per_s = 0.0;  // detuning from the atomic resonance
    double rabi_g0_per_s = 0.0;          // single-atom vacuum Rabi frequency
};

struct CouplingReport {
    double coupling_per_s = 0.0;        // G from the microscopic chain
    double lattice_depth_per_s = 0.0;   // U0 = g0^2 / Delta_a
    double side_mode_mass_kg = 0.0;
    bool dispersive_regime = true;      // |Delta_a| >= 10 g0
};

// All rates resolved to absolute angular frequencies, plus steady-state means.
struct DerivedNode {
    double kappa = 0.0;            // cavity amplitude damping
    double optical_omega = 0.0;    // cavity field angular frequency
    double bec_detuning = 0.0;     // Omega_c = 4 omega_R + omega_sw / 2
    double bogoliubov_freq = 0.0;  // omega_B = sqrt(Omega_c (Omega_c + omega_sw))
    double thermal_occupation = 0.0;
    double detuning = 0.0;         // Delta
    double coupling = 0.0;         // G
    double bec_damping = 0.0;      // gamma_c
    double swave_freq = 0.0;       // omega_sw
    double recoil_freq = 0.0;      // omega_R
    double drive = 0.0;            // E_d
    double alpha_s = 0.0;          // steady cavity amplitude, real non-negative
    double q_s = 0.0;
    double p_s = 0.0;
};

struct SteadyState {
    double q = 0.0;
    double p = 0.0;
    double alpha = 0.0;
};

// Which optical diffusion entry the linear model carries. The consistent
// choice reproduces vacuum variance 1/2 for a decoupled cavity; the
// alternative keeps the literal transcription (twice that) for comparison.
enum class DiffusionConvention { vacuum_half, literal_double };

struct LinearModel {
    Eigen::Matrix4d a = Eigen::Matrix4d::Zero();   // drift over (dQ, dP, dX, dY)
    Eigen::Vector4d d_diag = Eigen::Vector4d::Zero();  // diffusion diagonal
    Eigen::Vector4d p_diag = Eigen::Vector4d::Zero();  // output port diagonal
    double kappa = 0.0;
    DiffusionConvention convention = DiffusionConvention::vacuum_half;
};

DerivedNode derive_node(const NodeParams& params);

SteadyState steady_state(const DerivedNode& node);

LinearModel build_linear_model(const DerivedNode& node,
                               DiffusionConvention convention = DiffusionConvention::vacuum_half);

bool is_stable(const LinearModel& model);

// Microscopic coupling: U0 = g0^2/Delta_a, m_s = hbar wc^2/(L^2 N U0^2 wR),
// G = (wc/L) sqrt(hbar/(4 wR m_s)). Reported alongside the ratio route when
// atomic inputs are available.
CouplingReport derive_coupling(const NodeParams& params, const AtomicParams& atomic);

// Fixed point of Delta = stark_detuning + G * Q_s(Delta). Unused by the
// reproduction presets, which set Delta directly.
double solve_effective_detuning(const DerivedNode& node, double stark_detuning_per_s);

}  // namespace becbell

#endif
