#pragma once

#include <string>
#include <vector>

#include "becbell/bell_detection.hpp"

namespace becbell {

struct SuiteOptions {
    /// Multiplies every suite's acceptance threshold;< 1 tightens.
    double tol_scale = 1.0;
    /// Forwarded to bell_condition. Any value other than `none` is expected
    /// to make the bell_oracle suite fail with a localized report.
    KernelMutation mutation = KernelMutation::none;
};

struct SuiteResult {
    std::string name;
    bool passed = false;
    double worst = 0.0;      // worst deviation observed across the suite
    double threshold = 0.0;  // acceptance threshold after scaling
    std::string detail;      // localization of the worst deviation
};

/// Cross-checks of the numerical core against independent routes:
///  - calibration_decoupled: zero-coupling filtered node covariance against
///    the closed thermal/vacuum form on an (Omega, epsilon) grid,
///  - lyapunov_integral: unfiltered frequency integral against the direct
///    Lyapunov solution on random stable models,
///  - bell_oracle: kernel conditioning against the general-dyne composition
///    on random states and detector settings,
///  - measures_reference: discord and log negativity against closed forms
///    and the 50-digit evaluation.
std::vector<SuiteResult> run_validation_suites(const SuiteOptions& options = {});

}  // namespace becbell
