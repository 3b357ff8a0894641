#include "becbell/sweep_engine.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <optional>
#include <thread>
#include <utility>

#include "becbell/spectral_solver.hpp"

namespace becbell {

namespace {

// Everything one node solve depends on, in value form so identical solves
// can be deduplicated across grid points.
struct NodeTask {
    NodeParams params;
    double center_ratio = 0.0;
    std::optional<double> center_per_s;
    double epsilon = 0.0;
    double tol = 0.0;
    DiffusionConvention convention = DiffusionConvention::vacuum_half;
};

std::vector<double> task_key(const NodeTask& t) {
    std::vector<double> key = {t.params.cavity_length_m,
                               t.params.wavelength_m,
                               t.params.finesse,
                               t.params.drive_amplitude_kappa,
                               t.params.detuning_omega_c,
                               t.params.recoil_omega_per_s,
                               t.params.swave_frequency_recoil,
                               t.params.bec_damping_kappa,
                               t.params.coupling_omega_b,
                               t.params.condensate_temperature_k,
                               t.center_ratio,
                               t.epsilon,
                               t.tol,
                               t.convention == DiffusionConvention::vacuum_half ? 0.0 : 1.0};
    for (const auto& opt : {t.params.kappa_per_s, t.params.drive_power_w,
                            t.params.detuning_per_s, t.params.coupling_per_s, t.center_per_s}) {
        key.push_back(opt.has_value() ? 1.0 : 0.0);
        key.push_back(opt.value_or(0.0));
    }
    return key;
}

struct NodeOutcome {
    std::optional<NodeCM> cm;
    bool stable = false;
    int error_code = 0;
};

NodeOutcome solve_node(const NodeTask& task) {
    NodeOutcome out;
    try {
        const DerivedNode node = derive_node(task.params);
        const LinearModel model = build_linear_model(node, task.convention);
        out.stable = is_stable(model);
        if (!out.stable) {
            out.error_code = 2;
            return out;
        }
        const double omega =
            task.center_per_s ? *task.center_per_s : task.center_ratio * node.bogoliubov_freq;
        if (std::abs(omega) < 1e-9 * node.bogoliubov_freq) {
            // epsilon = |Omega| tau cannot be resolved into a bandwidth at
            // zero central frequency; the point is reported, not computed.
            out.error_code = 2;
            return out;
        }
        out.cm = filtered_node_cm(model, FilterSpec{omega, task.epsilon / std::abs(omega)},
                                  task.tol);
    } catch (const StructuralError&) {
        out.error_code = 1;
    } catch (const DomainError&) {
        out.error_code = 2;
    } catch (const NumericalError&) {
        out.error_code = 3;
    }
    return out;
}

void apply_axis(PipelineConfig& cfg, SweepAxis axis, double value) {
    switch (axis) {
        case SweepAxis::epsilon1:
            cfg.epsilon_a = value;
            break;
        case SweepAxis::epsilon2:
            cfg.epsilon_b = value;
            break;
        case SweepAxis::omega1_ratio:
            cfg.filter_center_a_omega_b = value;
            cfg.filter_center_a_per_s.reset();
            break;
        case SweepAxis::omega2_ratio:
            cfg.filter_center_b_omega_b = value;
            cfg.filter_center_b_per_s.reset();
            break;
        case SweepAxis::eta:
            cfg.bell.eta1 = value;
            cfg.bell.eta2 = value;
            break;
        case SweepAxis::swave_ratio:
            cfg.node_a.swave_frequency_recoil = value;
            cfg.node_b.swave_frequency_recoil = value;
            break;
        case SweepAxis::transmissivity:
            cfg.bell.transmissivity = value;
            break;
        case SweepAxis::coupling_ratio:
            cfg.node_a.coupling_omega_b = value;
            cfg.node_b.coupling_omega_b = value;
            cfg.node_a.coupling_per_s.reset();
            cfg.node_b.coupling_per_s.reset();
            break;
        case SweepAxis::drive_ratio:
            cfg.node_a.drive_amplitude_kappa = value;
            cfg.node_b.drive_amplitude_kappa = value;
            cfg.node_a.drive_power_w.reset();
            cfg.node_b.drive_power_w.reset();
            break;
    }
}

// Range check for values an axis may take; grid construction rejects ranges
// whose interior leaves the knob domain. Filter centers are exempt: zero is
// representable but unresolvable, and is reported per point instead.
void require_axis_range(const AxisSpec& axis) {
    if (axis.count < 2) {
        throw StructuralError("sweep axes need at least two points");
    }
    if (!std::isfinite(axis.min) || !std::isfinite(axis.max)) {
        throw StructuralError("sweep axis range must be finite");
    }
    const double lo = std::min(axis.min, axis.max);
    const double hi = std::max(axis.min, axis.max);
    switch (axis.axis) {
        case SweepAxis::epsilon1:
        case SweepAxis::epsilon2:
            if (lo <= 0.0) throw StructuralError("bandwidth parameter must stay positive");
            break;
        case SweepAxis::eta:
            if (lo <= 0.0 || hi > 1.0) {
                throw StructuralError("efficiency axis must stay within (0, 1]");
            }
            break;
        case SweepAxis::transmissivity:
            if (lo <= 0.0 || hi >= 1.0) {
                throw StructuralError("transmissivity axis must stay within (0, 1)");
            }
            break;
        case SweepAxis::swave_ratio:
        case SweepAxis::coupling_ratio:
        case SweepAxis::drive_ratio:
            if (lo < 0.0) throw StructuralError("rate-ratio axes must be non-negative");
            break;
        case SweepAxis::omega1_ratio:
        case SweepAxis::omega2_ratio:
            break;
    }
}

NodeTask task_a(const PipelineConfig& cfg) {
    return NodeTask{cfg.node_a,       cfg.filter_center_a_omega_b, cfg.filter_center_a_per_s,
                    cfg.epsilon_a,    cfg.solver_tol,              cfg.convention};
}

NodeTask task_b(const PipelineConfig& cfg) {
    return NodeTask{cfg.node_b,       cfg.filter_center_b_omega_b, cfg.filter_center_b_per_s,
                    cfg.epsilon_b,    cfg.solver_tol,              cfg.convention};
}

SweepPoint combine(const PipelineConfig& cfg, const std::array<double, 2>& coords,
                   const NodeOutcome& a, const NodeOutcome& b) {
    SweepPoint point;
    point.coords = coords;
    point.stable = a.stable && b.stable;
    if (a.error_code != 0 || b.error_code != 0) {
        point.error_code = a.error_code != 0 ? a.error_code : b.error_code;
        return point;
    }
    try {
        const TwoNodeState state = TwoNodeState::assemble(*a.cm, *b.cm);
        const CovarianceMatrix conditional = bell_condition(state, cfg.bell);
        point.measures = measure(conditional, cfg.measured_mode);
    } catch (const StructuralError&) {
        point.error_code = 1;
    } catch (const DomainError&) {
        point.error_code = 2;
    } catch (const NumericalError&) {
        point.error_code = 3;
    }
    return point;
}

// Runs body(i) for i in [0, n) on `workers` threads. Slots are disjoint, so
// the only shared state is the work counter; output is scheduling-invariant.
template <typename Body>
void parallel_for(std::size_t n, int workers, Body body) {
    if (workers <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto run = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    const std::size_t n_threads = std::min<std::size_t>(static_cast<std::size_t>(workers), n);
    pool.reserve(n_threads);
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(run);
    for (auto& thread : pool) thread.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace

SweepPoint evaluate_point(const PipelineConfig& base, const std::vector<AxisSpec>& axes,
                          const std::vector<double>& values) {
    if (values.size() != axes.size() || axes.size() > 2) {
        throw StructuralError("axis values must match the sweep axes (at most two)");
    }
    PipelineConfig cfg = base;
    std::array<double, 2> coords = {0.0, 0.0};
    for (std::size_t i = 0; i < axes.size(); ++i) {
        apply_axis(cfg, axes[i].axis, values[i]);
        coords[i] = values[i];
    }
    const NodeOutcome a = solve_node(task_a(cfg));
    const NodeOutcome b = solve_node(task_b(cfg));
    return combine(cfg, coords, a, b);
}

SweepResult run_sweep(const SweepSpec& spec, int workers) {
    if (spec.axes.empty() || spec.axes.size() > 2) {
        throw StructuralError("sweeps take one or two axes");
    }
    for (const AxisSpec& axis : spec.axes) require_axis_range(axis);
    if (workers < 1) {
        throw StructuralError("worker count must be positive");
    }
    if (!(spec.base.solver_tol > 0.0)) {
        throw StructuralError("solver tolerance must be positive");
    }
    if (spec.base.measured_mode != 1 && spec.base.measured_mode != 2) {
        throw StructuralError("measured mode must be 1 or 2");
    }

    SweepResult result;
    result.spec = spec;
    for (const AxisSpec& axis : spec.axes) {
        std::vector<double> values(axis.count);
        for (int i = 0; i < axis.count; ++i) {
            values[i] = axis.min + (axis.max - axis.min) * i / (axis.count - 1);
        }
        result.axis_values.push_back(std::move(values));
    }

    const std::size_t n_outer = result.axis_values[0].size();
    const std::size_t n_inner = spec.axes.size() == 2 ? result.axis_values[1].size() : 1;
    const std::size_t n_points = n_outer * n_inner;

    // Pass 1: resolve each point's two node tasks, deduplicated in first-seen
    // order so the task list (and therefore every result) is independent of
    // scheduling.
    std::vector<NodeTask> tasks;
    std::map<std::vector<double>, std::size_t> task_index;
    auto intern = [&](const NodeTask& task) {
        const auto [it, inserted] = task_index.try_emplace(task_key(task), tasks.size());
        if (inserted) tasks.push_back(task);
        return it->second;
    };

    std::vector<PipelineConfig> configs(n_points, spec.base);
    std::vector<std::array<double, 2>> coords(n_points);
    std::vector<std::pair<std::size_t, std::size_t>> point_tasks(n_points);
    for (std::size_t p = 0; p < n_points; ++p) {
        PipelineConfig& cfg = configs[p];
        const std::size_t i0 = p / n_inner;
        apply_axis(cfg, spec.axes[0].axis, result.axis_values[0][i0]);
        coords[p][0] = result.axis_values[0][i0];
        if (spec.axes.size() == 2) {
            const std::size_t i1 = p % n_inner;
            apply_axis(cfg, spec.axes[1].axis, result.axis_values[1][i1]);
            coords[p][1] = result.axis_values[1][i1];
        }
        point_tasks[p] = {intern(task_a(cfg)), intern(task_b(cfg))};
    }

    // Pass 2: solve the distinct node spectra.
    std::vector<NodeOutcome> outcomes(tasks.size());
    parallel_for(tasks.size(), workers, [&](std::size_t i) { outcomes[i] = solve_node(tasks[i]); });

    // Pass 3: condition and measure every grid point.
    result.points.resize(n_points);
    parallel_for(n_points, workers, [&](std::size_t p) {
        result.points[p] = combine(configs[p], coords[p], outcomes[point_tasks[p].first],
                                   outcomes[point_tasks[p].second]);
    });
    return result;
}

}  // namespace becbell
