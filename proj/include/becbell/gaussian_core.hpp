#pragma once

#include <Eigen/Dense>
#include <vector>

#include "becbell/errors.hpp"

namespace becbell {

using Matrix = Eigen::MatrixXd;

/// Symmetrized covariance matrix of n bosonic modes in quadrature
/// ordering (x1, p1, x2, p2, ...). Vacuum quadrature variance is 1/2,
/// i.e. V = (1/2)<uu + uu> for zero-mean quadrature fluctuations.
class CovarianceMatrix {
public:
    /// Wraps a 2n x 2n matrix. Throws StructuralError unless the matrix
    /// is square with even dimension. Symmetry and physicality are
    /// checked separately by validate().
    explicit CovarianceMatrix(Matrix data);

    int n_modes() const { return n_modes_; }
    int dim() const { return 2 * n_modes_; }
    const Matrix& matrix() const { return data_; }
    double operator()(int i, int j) const { return data_(i, j); }

    /// 2x2 block coupling mode a to mode b (row block a, column block b).
    Eigen::Matrix2d mode_block(int a, int b) const;

private:
    int n_modes_;
    Matrix data_;
};

struct PhysicalityReport {
    bool symmetric = false;
    bool physical = false;
    /// Smallest eigenvalue of the Hermitian matrix V + (i/2) Omega.
    double worst_eigenvalue = 0.0;
    /// Largest relative asymmetry |V - V^T| / max(1, |V|).
    double symmetry_defect = 0.0;
};

struct SymplecticSpectrum {
    /// n symplectic eigenvalues, ascending; vacuum value is 1/2.
    std::vector<double> values;
    double min() const { return values.front(); }
};

/// Relative symmetry tolerance accepted by validate().
inline constexpr double kSymmetryTol = 1e-12;
/// Slack on the uncertainty-relation eigenvalue bound.
inline constexpr double kPhysicalityTol = 1e-9;

/// Block-diagonal symplectic form with 2x2 blocks [[0,1],[-1,0]].
Matrix symplectic_form(int n_modes);

/// Checks symmetry and the uncertainty relation V + (i/2) Omega >= 0.
/// Does not mutate or throw on a non-physical matrix; structural
/// problems were already rejected by the CovarianceMatrix constructor.
PhysicalityReport validate(const CovarianceMatrix& cm);

/// Symplectic eigenvalues as moduli of the spectrum of i Omega V,
/// deduplicated into n ascending values. Throws DomainError for a
/// non-physical input.
SymplecticSpectrum symplectic_eigenvalues(const CovarianceMatrix& cm);

/// Bosonic entropy function
///   f(x) = ((x+1)/2) log2((x+1)/2) - ((x-1)/2) log2((x-1)/2),
/// defined for x >= 1 with f(1) = 0. Arguments in [1 - 1e-9, 1) are
/// clamped to 1; smaller arguments throw DomainError.
double entropy_f(double x);

/// Reorders modes so that output mode i is input mode order[i]
/// (0-based). Rows and columns move in 2x2 blocks.
CovarianceMatrix permute_modes(const CovarianceMatrix& cm, const std::vector<int>& order);

struct TwoModeBlocks {
    Eigen::Matrix2d v1;  // mode-1 block
    Eigen::Matrix2d v2;  // mode-2 block
    Eigen::Matrix2d v3;  // upper-right cross block
};

/// Splits a 2-mode CM as [[V1, V3], [V3^T, V2]].
TwoModeBlocks extract_blocks(const CovarianceMatrix& cm);

}  // namespace becbell
