#ifndef BECBELL_CORRELATION_MEASURES_HPP
#define BECBELL_CORRELATION_MEASURES_HPP

#include "becbell/gaussian_core.hpp"

namespace becbell {

// Which closed-form expression supplied the conditional purity.
enum class EpsilonBranch { branch1, branch2 };

// Discord and log-negativity of a two-mode state, with the local-invariant
// diagnostics they are built from. Determinant invariants are scaled so the
// vacuum sits at s1 = s2 = s4 = 1; lambda are twice the symplectic
// eigenvalues, so physical inputs satisfy lambda_plus >= lambda_minus >= 1.
struct MeasureResult {
    double discord = 0.0;
    double log_negativity = 0.0;
    double s1 = 0.0;
    double s2 = 0.0;
    double s3 = 0.0;
    double s4 = 0.0;
    double lambda_plus = 0.0;
    double lambda_minus = 0.0;
    EpsilonBranch eps_branch = EpsilonBranch::branch1;
    double conditional_purity = 0.0;  // the epsilon under the final entropy term
    double eta_minus = 0.0;           // least partial-transpose symplectic eigenvalue
};

/// Evaluates both correlation measures. `measured_mode` selects which mode
/// the homodyne measurement in the discord definition acts on.
MeasureResult measure(const CovarianceMatrix& cm, int measured_mode = 1);

/// Discord alone (measure().discord).
double gaussian_discord(const CovarianceMatrix& cm, int measured_mode = 1);

/// Logarithmic negativity alone (measure().log_negativity).
double log_negativity(const CovarianceMatrix& cm);

}  // namespace becbell

#endif
