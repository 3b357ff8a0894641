#ifndef BECBELL_SPECTRAL_SOLVER_HPP
#define BECBELL_SPECTRAL_SOLVER_HPP

#include "becbell/gaussian_core.hpp"
#include "becbell/node_model.hpp"

namespace becbell {

// Causal single-pole filter applied to the cavity output field. A negative
// central frequency selects the lower motional sideband.
struct FilterSpec {
    double central_freq_per_s = 0.0;  // Omega
    double tau_s = 0.0;               // inverse bandwidth, > 0

    // Bandwidth-resolution product |Omega| * tau, the figure-axis quantity.
    double epsilon() const;
};

// Stationary covariance of (condensate mode, filtered output mode) for one
// node, ordering (Q, P, X_filt, Y_filt).
struct NodeCM {
    CovarianceMatrix cm;
    double quadrature_error_estimate = 0.0;
};

// Frequency-domain evaluation of the stationary filtered-output covariance:
// V = (1/2pi) Int dw Y(w) (M(w)+P) D (M(w)~+P) Y(w)~ with M(w) = (iwI+A)^-1.
// tol bounds the absolute quadrature error of every entry.
NodeCM filtered_node_cm(const LinearModel& model, const FilterSpec& filter, double tol = 1e-8);

// Intracavity steady state from A V + V A^T = -D via the vectorized solve.
// Independent route used to cross-check the frequency integral.
CovarianceMatrix lyapunov_steady_cm(const LinearModel& model);

// The frequency integral without filter and output port, which must agree
// with lyapunov_steady_cm: (1/2pi) Int dw M(w) D M(w)~.
CovarianceMatrix unfiltered_frequency_cm(const LinearModel& model, double tol = 1e-8);

}  // namespace becbell

#endif
