#include "becbell/bell_detection.hpp"

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace becbell {

namespace {

void require_config(const BellConfig& cfg) {
    if (!(cfg.transmissivity > 0.0) || !(cfg.transmissivity < 1.0)) {
        throw DomainError("beam-splitter transmissivity must lie strictly inside (0, 1)");
    }
    for (double eta : {cfg.eta1, cfg.eta2}) {
        if (!(eta > 0.0) || !(eta <= 1.0)) {
            throw DomainError("detector efficiency must lie in (0, 1]");
        }
    }
}

void require_physical(const CovarianceMatrix& cm, const char* what) {
    const PhysicalityReport report = validate(cm);
    if (!report.physical) {
        throw DomainError(std::string(what) + " is not a physical covariance matrix (worst " +
                          std::to_string(report.worst_eigenvalue) + ")");
    }
}

// Measurement rows on (X_A, Y_A, X_B, Y_B): X of output 1 and Y of output 2
// under the splitter X1 = sqrt(T) X_B - sqrt(1-T) X_A,
// X2 = sqrt(T) X_A + sqrt(1-T) X_B (same for Y).
Eigen::Matrix2d measured_rows(double t, int port) {
    const double rt = std::sqrt(t);
    const double rr = std::sqrt(1.0 - t);
    Eigen::Matrix2d r;
    if (port == 1) {
        r << -rr, 0.0, 0.0, rt;
    } else {
        r << rt, 0.0, 0.0, rr;
    }
    return r;
}

// Condition the state on one quadrature (axis 0 = X, 1 = Y) of the given
// mode, removing that mode. Pseudo-inverse with a relative cutoff.
Matrix homodyne_condition(const Matrix& v, int mode, int axis) {
    const int dim = static_cast<int>(v.rows());
    const int n_kept = dim - 2;
    std::vector<int> kept;
    for (int i = 0; i < dim; ++i) {
        if (i != 2 * mode && i != 2 * mode + 1) kept.push_back(i);
    }

    Eigen::Matrix2d vm = v.block<2, 2>(2 * mode, 2 * mode);
    Matrix cross(n_kept, 2);
    Matrix vk(n_kept, n_kept);
    for (int i = 0; i < n_kept; ++i) {
        cross(i, 0) = v(kept[i], 2 * mode);
        cross(i, 1) = v(kept[i], 2 * mode + 1);
        for (int j = 0; j < n_kept; ++j) vk(i, j) = v(kept[i], kept[j]);
    }

    Eigen::Matrix2d projected = Eigen::Matrix2d::Zero();
    projected(axis, axis) = vm(axis, axis);
    Eigen::Matrix2d pinv = Eigen::Matrix2d::Zero();
    if (std::abs(vm(axis, axis)) > 1e-12 * vm.cwiseAbs().maxCoeff()) {
        pinv(axis, axis) = 1.0 / projected(axis, axis);
    }
    return vk - cross * pinv * cross.transpose();
}

}  // namespace

TwoNodeState TwoNodeState::assemble(const NodeCM& node_a, const NodeCM& node_b) {
    if (node_a.cm.n_modes() != 2 || node_b.cm.n_modes() != 2) {
        throw StructuralError("node states must have exactly two modes");
    }
    require_physical(node_a.cm, "first node state");
    require_physical(node_b.cm, "second node state");

    Matrix direct = Matrix::Zero(8, 8);
    direct.block<4, 4>(0, 0) = node_a.cm.matrix();
    direct.block<4, 4>(4, 4) = node_b.cm.matrix();
    // (BEC_A, opt_A, BEC_B, opt_B) -> (BEC_A, BEC_B, opt_A, opt_B)
    return TwoNodeState(permute_modes(CovarianceMatrix(std::move(direct)), {0, 2, 1, 3}));
}

TwoNodeState TwoNodeState::from_cm(CovarianceMatrix cm) {
    if (cm.n_modes() != 4) {
        throw StructuralError("joint state must have exactly four modes");
    }
    require_physical(cm, "joint state");
    return TwoNodeState(std::move(cm));
}

Eigen::Matrix4d TwoNodeState::bec_pair() const { return cm_.matrix().block<4, 4>(0, 0); }

Eigen::Matrix<double, 4, 2> TwoNodeState::bec_optics(int i) const {
    if (i != 1 && i != 2) throw StructuralError("optical mode index must be 1 or 2");
    return cm_.matrix().block<4, 2>(0, 2 + 2 * i);
}

Eigen::Matrix2d TwoNodeState::optics_block(int i) const {
    if (i != 1 && i != 2) throw StructuralError("optical mode index must be 1 or 2");
    return cm_.matrix().block<2, 2>(2 + 2 * i, 2 + 2 * i);
}

Eigen::Matrix2d TwoNodeState::optics_cross() const { return cm_.matrix().block<2, 2>(4, 6); }

Eigen::Matrix2d gamma_matrix(const TwoNodeState& state, const BellConfig& cfg) {
    require_config(cfg);
    const double t = cfg.transmissivity;
    const Eigen::Matrix2d b1 = state.optics_block(1);
    const Eigen::Matrix2d b2 = state.optics_block(2);
    const Eigen::Matrix2d w = state.optics_cross();

    const double cross = std::sqrt(t * (1.0 - t));
    Eigen::Matrix2d gamma;
    gamma(0, 0) = (1.0 - t) * b1(0, 0) + t * b2(0, 0) - 2.0 * cross * w(0, 0) +
                  (1.0 - cfg.eta1) / (2.0 * cfg.eta1);
    gamma(1, 1) = t * b1(1, 1) + (1.0 - t) * b2(1, 1) + 2.0 * cross * w(1, 1) +
                  (1.0 - cfg.eta2) / (2.0 * cfg.eta2);
    gamma(0, 1) = cross * (b2(0, 1) - b1(0, 1)) - (1.0 - t) * w(0, 1) + t * w(1, 0);
    gamma(1, 0) = gamma(0, 1);

    const double det = gamma(0, 0) * gamma(1, 1) - gamma(0, 1) * gamma(1, 0);
    const double scale = gamma(0, 0) * gamma(1, 1) + gamma(0, 1) * gamma(0, 1);
    if (det <= 1e-12 * scale) {
        throw DomainError("measured-quadrature covariance is degenerate");
    }
    return gamma;
}

CovarianceMatrix bell_condition(const TwoNodeState& state, const BellConfig& cfg,
                                KernelMutation mutation) {
    const Eigen::Matrix2d gamma = gamma_matrix(state, cfg);
    const double det = gamma(0, 0) * gamma(1, 1) - gamma(0, 1) * gamma(1, 0);

    Eigen::Matrix2d adjugate;
    adjugate << gamma(1, 1), -gamma(0, 1), -gamma(1, 0), gamma(0, 0);

    const double t = cfg.transmissivity;
    const Eigen::Matrix2d r1 = measured_rows(t, 1);
    const Eigen::Matrix2d r2 = measured_rows(t, 2);

    Eigen::Matrix4d update = Eigen::Matrix4d::Zero();
    const Eigen::Matrix2d rows[2] = {r1, r2};
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            Eigen::Matrix2d kernel = rows[i].transpose() * adjugate * rows[j];
            if (mutation == KernelMutation::flip_cross_yy && i != j) {
                kernel(1, 1) = -kernel(1, 1);
            }
            update += state.bec_optics(i + 1) * kernel * state.bec_optics(j + 1).transpose();
        }
    }

    Eigen::Matrix4d v = state.bec_pair() - update / det;
    Matrix sym = 0.5 * (v + v.transpose());
    CovarianceMatrix result(std::move(sym));
    const PhysicalityReport report = validate(result);
    if (!report.physical) {
        throw NumericalError("conditional covariance violates the uncertainty relation",
                             report.worst_eigenvalue);
    }
    return result;
}

CovarianceMatrix general_dyne_oracle(const TwoNodeState& state, const BellConfig& cfg) {
    require_config(cfg);
    const double t = cfg.transmissivity;
    const double rt = std::sqrt(t);
    const double rr = std::sqrt(1.0 - t);

    // Beam splitter on the optical pair (modes 2 and 3).
    Matrix s = Matrix::Identity(8, 8);
    for (int q = 0; q < 2; ++q) {
        s(4 + q, 4 + q) = -rr;
        s(4 + q, 6 + q) = rt;
        s(6 + q, 4 + q) = rt;
        s(6 + q, 6 + q) = rr;
    }
    Matrix v = s * state.cm().matrix() * s.transpose();

    // Detection loss on each output mode.
    const double etas[2] = {cfg.eta1, cfg.eta2};
    for (int m = 0; m < 2; ++m) {
        const double eta = etas[m];
        if (eta >= 1.0) continue;
        const int base = 4 + 2 * m;
        const double root = std::sqrt(eta);
        v.row(base) *= root;
        v.row(base + 1) *= root;
        v.col(base) *= root;
        v.col(base + 1) *= root;
        v(base, base) += (1.0 - eta) / 2.0;
        v(base + 1, base + 1) += (1.0 - eta) / 2.0;
    }

    // X homodyne on output 1 (mode 2), then Y homodyne on output 2, which
    // sits at mode index 2 after the first mode removal.
    Matrix after_x = homodyne_condition(v, 2, 0);
    Matrix after_y = homodyne_condition(after_x, 2, 1);
    Matrix sym = 0.5 * (after_y + after_y.transpose());
    return CovarianceMatrix(std::move(sym));
}

}  // namespace becbell
