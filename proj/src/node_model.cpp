#include "becbell/node_model.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "becbell/constants.hpp"

namespace becbell {

namespace {

void require_positive(double value, const char* name) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw DomainError(std::string(name) + " must be a positive finite number");
    }
}

void require_non_negative(double value, const char* name) {
    if (!(value >= 0.0) || !std::isfinite(value)) {
        throw DomainError(std::string(name) + " must be a non-negative finite number");
    }
}

}  // namespace

DerivedNode derive_node(const NodeParams& params) {
    require_positive(params.cavity_length_m, "cavity length");
    require_positive(params.wavelength_m, "wavelength");
    require_positive(params.recoil_omega_per_s, "recoil frequency");
    require_non_negative(params.swave_frequency_recoil, "s-wave frequency ratio");
    require_non_negative(params.bec_damping_kappa, "condensate damping ratio");
    require_non_negative(params.coupling_omega_b, "coupling ratio");
    require_non_negative(params.condensate_temperature_k, "condensate temperature");
    if (!std::isfinite(params.detuning_omega_c)) {
        throw DomainError("detuning ratio must be finite");
    }

    DerivedNode node;
    if (params.kappa_per_s) {
        require_positive(*params.kappa_per_s, "cavity damping");
        node.kappa = *params.kappa_per_s;
    } else {
        require_positive(params.finesse, "finesse");
        node.kappa = constants::pi * constants::speed_of_light /
                     (params.cavity_length_m * params.finesse);
    }
    node.optical_omega =
        2.0 * constants::pi * constants::speed_of_light / params.wavelength_m;

    node.recoil_freq = params.recoil_omega_per_s;
    node.swave_freq = params.swave_frequency_recoil * node.recoil_freq;
    node.bec_detuning = 4.0 * node.recoil_freq + 0.5 * node.swave_freq;
    node.bogoliubov_freq = std::sqrt(node.bec_detuning * (node.bec_detuning + node.swave_freq));

    if (params.condensate_temperature_k == 0.0) {
        node.thermal_occupation = 0.0;
    } else {
        const double x = constants::hbar * node.bogoliubov_freq /
                         (constants::boltzmann * params.condensate_temperature_k);
        node.thermal_occupation = 1.0 / std::expm1(x);
    }

    if (params.detuning_per_s) {
        if (!std::isfinite(*params.detuning_per_s)) {
            throw DomainError("detuning must be finite");
        }
        node.detuning = *params.detuning_per_s;
    } else {
        node.detuning = params.detuning_omega_c * node.bec_detuning;
    }
    if (params.coupling_per_s) {
        require_non_negative(*params.coupling_per_s, "coupling");
        node.coupling = *params.coupling_per_s;
    } else {
        node.coupling = params.coupling_omega_b * node.bogoliubov_freq;
    }
    node.bec_damping = params.bec_damping_kappa * node.kappa;
    if (params.drive_power_w) {
        require_non_negative(*params.drive_power_w, "drive power");
        node.drive = std::sqrt(2.0 * (*params.drive_power_w) * node.kappa /
                               (constants::hbar * node.optical_omega));
    } else {
        require_non_negative(params.drive_amplitude_kappa, "drive amplitude ratio");
        node.drive = params.drive_amplitude_kappa * node.kappa;
    }

    const SteadyState ss = steady_state(node);
    node.alpha_s = ss.alpha;
    node.q_s = ss.q;
    node.p_s = ss.p;
    return node;
}

SteadyState steady_state(const DerivedNode& node) {
    if (node.bec_detuning == 0.0) {
        throw DomainError("steady state undefined at zero condensate detuning");
    }
    SteadyState ss;
    ss.alpha = node.drive / std::sqrt(node.detuning * node.detuning + node.kappa * node.kappa);
    const double denom = node.bec_detuning + node.swave_freq +
                         node.bec_damping * node.bec_damping / node.bec_detuning;
    ss.q = -node.coupling * ss.alpha * ss.alpha / denom;
    ss.p = (node.bec_damping / node.bec_detuning) * ss.q;
    return ss;
}

LinearModel build_linear_model(const DerivedNode& node, DiffusionConvention convention) {
    LinearModel model;
    model.kappa = node.kappa;
    model.convention = convention;

    const double g_eff = std::sqrt(2.0) * node.coupling * node.alpha_s;
    model.a << -node.bec_damping, node.bec_detuning, 0.0, 0.0,
               -(node.bec_detuning + node.swave_freq), -node.bec_damping, -g_eff, 0.0,
               0.0, 0.0, -node.kappa, node.detuning,
               -g_eff, 0.0, -node.detuning, -node.kappa;

    const double d_bec = node.bec_damping * (2.0 * node.thermal_occupation + 1.0);
    const double d_opt =
        convention == DiffusionConvention::vacuum_half ? node.kappa : 2.0 * node.kappa;
    model.d_diag << d_bec, d_bec, d_opt, d_opt;
    model.p_diag << 0.0, 0.0, 0.5 / node.kappa, 0.5 / node.kappa;
    return model;
}

bool is_stable(const LinearModel& model) {
    const double margin = 1e-12 * model.a.norm();
    const Eigen::EigenSolver<Eigen::Matrix4d> es(model.a, false);
    for (int i = 0; i < 4; ++i) {
        if (es.eigenvalues()(i).real() >= -margin) return false;
    }
    return true;
}

CouplingReport derive_coupling(const NodeParams& params, const AtomicParams& atomic) {
    require_positive(atomic.atom_number, "atom number");
    require_positive(atomic.rabi_g0_per_s, "vacuum Rabi frequency");
    if (atomic.atomic_detuning_per_s == 0.0 || !std::isfinite(atomic.atomic_detuning_per_s)) {
        throw DomainError("atomic detuning must be finite and non-zero");
    }

    const DerivedNode node = derive_node(params);
    CouplingReport report;
    report.lattice_depth_per_s =
        atomic.rabi_g0_per_s * atomic.rabi_g0_per_s / atomic.atomic_detuning_per_s;
    report.side_mode_mass_kg =
        constants::hbar * node.optical_omega * node.optical_omega /
        (params.cavity_length_m * params.cavity_length_m * atomic.atom_number *
         report.lattice_depth_per_s * report.lattice_depth_per_s * node.recoil_freq);
    report.coupling_per_s =
        (node.optical_omega / params.cavity_length_m) *
        std::sqrt(constants::hbar / (4.0 * node.recoil_freq * report.side_mode_mass_kg));
    report.dispersive_regime =
        std::abs(atomic.atomic_detuning_per_s) >= 10.0 * atomic.rabi_g0_per_s;
    return report;
}

double solve_effective_detuning(const DerivedNode& node, double stark_detuning_per_s) {
    if (!std::isfinite(stark_detuning_per_s)) {
        throw DomainError("stark detuning must be finite");
    }
    const double scale = std::max(std::abs(stark_detuning_per_s), node.kappa);
    double delta = stark_detuning_per_s;
    for (int iter = 0; iter < 200; ++iter) {
        DerivedNode trial = node;
        trial.detuning = delta;
        const SteadyState ss = steady_state(trial);
        const double next = stark_detuning_per_s + node.coupling * ss.q;
        if (std::abs(next - delta) <= 1e-12 * scale) return next;
        delta = next;
    }
    throw NumericalError("effective detuning iteration did not converge", std::abs(delta));
}

}  // namespace becbell
