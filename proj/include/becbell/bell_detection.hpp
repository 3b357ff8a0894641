#ifndef BECBELL_BELL_DETECTION_HPP
#define BECBELL_BELL_DETECTION_HPP

#include <Eigen/Dense>

#include "becbell/gaussian_core.hpp"
#include "becbell/spectral_solver.hpp"

namespace becbell {

// Joint state of two nodes before detection, ordering
// (BEC_A, BEC_B, opt_A, opt_B).
class TwoNodeState {
  public:
    // Direct-sum assembly of two independent node states given in the
    // per-node ordering (BEC, opt). Cross-node blocks are exactly zero.
    static TwoNodeState assemble(const NodeCM& node_a, const NodeCM& node_b);

    // Accepts any physical 4-mode covariance in the joint ordering,
    // including cross-node correlations. Used by the conditioning tests.
    static TwoNodeState from_cm(CovarianceMatrix cm);

    const CovarianceMatrix& cm() const { return cm_; }

    Eigen::Matrix4d bec_pair() const;                   // A'
    Eigen::Matrix<double, 4, 2> bec_optics(int i) const;  // C_i, i in {1, 2}
    Eigen::Matrix2d optics_block(int i) const;          // B_i
    Eigen::Matrix2d optics_cross() const;               // W

  private:
    explicit TwoNodeState(CovarianceMatrix cm) : cm_(std::move(cm)) {}
    CovarianceMatrix cm_;
};

struct BellConfig {
    double transmissivity = 0.5;  // in (0, 1)
    double eta1 = 1.0;            // in (0, 1]
    double eta2 = 1.0;
};

// Test hook: negate the lower-right entry of the cross kernel. The mutated
// kernel is not a valid Gaussian conditioning and must break agreement with
// the general-dyne route; keeping it around documents the sign choice.
enum class KernelMutation { none, flip_cross_yy };

// Covariance of the measured quadratures (X of output 1, Y of output 2)
// including detection noise (1-eta)/(2 eta).
Eigen::Matrix2d gamma_matrix(const TwoNodeState& state, const BellConfig& cfg);

// Conditional BEC-BEC covariance after the beam splitter and the two
// conjugate homodyne detections, via the closed-form kernel update.
CovarianceMatrix bell_condition(const TwoNodeState& state, const BellConfig& cfg,
                                KernelMutation mutation = KernelMutation::none);

// Same conditional covariance by explicit composition: beam-splitter
// symplectic, per-mode loss, then sequential single-quadrature conditioning
// with a pseudo-inverse. Independent arbiter for bell_condition.
CovarianceMatrix general_dyne_oracle(const TwoNodeState& state, const BellConfig& cfg);

}  // namespace becbell

#endif
