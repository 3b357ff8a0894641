#include "becbell/gaussian_core.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include <Eigen/Eigenvalues>

namespace becbell {

CovarianceMatrix::CovarianceMatrix(Matrix data) : data_(std::move(data)) {
    if (data_.rows() != data_.cols()) {
        throw StructuralError("covariance matrix must be square, got " +
                              std::to_string(data_.rows()) + "x" + std::to_string(data_.cols()));
    }
    if (data_.rows() == 0 || data_.rows() % 2 != 0) {
        throw StructuralError("covariance matrix dimension must be a positive even number, got " +
                              std::to_string(data_.rows()));
    }
    n_modes_ = static_cast<int>(data_.rows()) / 2;
}

Eigen::Matrix2d CovarianceMatrix::mode_block(int a, int b) const {
    if (a < 0 || a >= n_modes_ || b < 0 || b >= n_modes_) {
        throw StructuralError("mode index out of range");
    }
    return data_.block<2, 2>(2 * a, 2 * b);
}

Matrix symplectic_form(int n_modes) {
    Matrix omega = Matrix::Zero(2 * n_modes, 2 * n_modes);
    for (int k = 0; k < n_modes; ++k) {
        omega(2 * k, 2 * k + 1) = 1.0;
        omega(2 * k + 1, 2 * k) = -1.0;
    }
    return omega;
}

PhysicalityReport validate(const CovarianceMatrix& cm) {
    PhysicalityReport report;
    const Matrix& v = cm.matrix();

    const double scale = std::max(1.0, v.cwiseAbs().maxCoeff());
    report.symmetry_defect = (v - v.transpose()).cwiseAbs().maxCoeff() / scale;
    report.symmetric = report.symmetry_defect <= kSymmetryTol;

    // Uncertainty relation: V + (i/2) Omega must be positive semidefinite.
    const int d = cm.dim();
    Eigen::MatrixXcd h(d, d);
    h = v.cast<std::complex<double>>();
    const Matrix omega = symplectic_form(cm.n_modes());
    h += std::complex<double>(0.0, 0.5) * omega.cast<std::complex<double>>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
    report.worst_eigenvalue = es.eigenvalues().minCoeff();
    report.physical = report.symmetric && report.worst_eigenvalue >= -kPhysicalityTol;
    return report;
}

SymplecticSpectrum symplectic_eigenvalues(const CovarianceMatrix& cm) {
    const PhysicalityReport report = validate(cm);
    if (!report.physical) {
        throw DomainError("symplectic spectrum requested for a non-physical covariance matrix "
                          "(worst eigenvalue " + std::to_string(report.worst_eigenvalue) + ")");
    }

    const int n = cm.n_modes();
    Eigen::MatrixXcd m = std::complex<double>(0.0, 1.0) *
                         (symplectic_form(n) * cm.matrix()).cast<std::complex<double>>();
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, false);

    std::vector<double> moduli(2 * n);
    for (int i = 0; i < 2 * n; ++i) moduli[i] = std::abs(es.eigenvalues()(i));
    std::sort(moduli.begin(), moduli.end());

    // Eigenvalues of i Omega V come in +/- pairs; average each pair.
    SymplecticSpectrum spectrum;
    spectrum.values.resize(n);
    for (int k = 0; k < n; ++k) {
        spectrum.values[k] = 0.5 * (moduli[2 * k] + moduli[2 * k + 1]);
    }
    return spectrum;
}

double entropy_f(double x) {
    if (x < 1.0 - kPhysicalityTol) {
        throw DomainError("entropy argument " + std::to_string(x) + " below 1");
    }
    if (x <= 1.0) return 0.0;
    const double up = 0.5 * (x + 1.0);
    const double dn = 0.5 * (x - 1.0);
    const double t2 = dn > 0.0 ? dn * std::log2(dn) : 0.0;
    return up * std::log2(up) - t2;
}

CovarianceMatrix permute_modes(const CovarianceMatrix& cm, const std::vector<int>& order) {
    const int n = cm.n_modes();
    if (static_cast<int>(order.size()) != n) {
        throw StructuralError("permutation length " + std::to_string(order.size()) +
                              " does not match mode count " + std::to_string(n));
    }
    std::vector<bool> seen(n, false);
    for (int m : order) {
        if (m < 0 || m >= n || seen[m]) {
            throw StructuralError("invalid mode permutation");
        }
        seen[m] = true;
    }

    Matrix out(2 * n, 2 * n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            out.block<2, 2>(2 * i, 2 * j) = cm.matrix().block<2, 2>(2 * order[i], 2 * order[j]);
        }
    }
    return CovarianceMatrix(std::move(out));
}

TwoModeBlocks extract_blocks(const CovarianceMatrix& cm) {
    if (cm.n_modes() != 2) {
        throw StructuralError("block extraction requires a 2-mode covariance matrix, got " +
                              std::to_string(cm.n_modes()) + " modes");
    }
    TwoModeBlocks blocks;
    blocks.v1 = cm.matrix().block<2, 2>(0, 0);
    blocks.v2 = cm.matrix().block<2, 2>(2, 2);
    blocks.v3 = cm.matrix().block<2, 2>(0, 2);
    return blocks;
}

}  // namespace becbell
