#include "becbell/oracles.hpp"

#include <cmath>
#include <random>
#include <string>

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace becbell::oracles {

namespace {

using real50 = boost::multiprecision::cpp_bin_float_50;

Matrix embed_one_mode(int n_modes, int mode, const Eigen::Matrix2d& op) {
    Matrix s = Matrix::Identity(2 * n_modes, 2 * n_modes);
    s.block<2, 2>(2 * mode, 2 * mode) = op;
    return s;
}

Matrix beam_splitter(int n_modes, int a, int b, double theta) {
    Matrix s = Matrix::Identity(2 * n_modes, 2 * n_modes);
    const double c = std::cos(theta);
    const double d = std::sin(theta);
    for (int q = 0; q < 2; ++q) {
        s(2 * a + q, 2 * a + q) = c;
        s(2 * a + q, 2 * b + q) = d;
        s(2 * b + q, 2 * a + q) = -d;
        s(2 * b + q, 2 * b + q) = c;
    }
    return s;
}

real50 det2hp(const real50& a, const real50& b, const real50& c, const real50& d) {
    return a * d - b * c;
}

real50 det3hp(const real50 m[3][3]) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

real50 det4hp(const real50 m[4][4]) {
    real50 total = 0;
    for (int col = 0; col < 4; ++col) {
        real50 minor[3][3];
        for (int i = 1; i < 4; ++i) {
            int jj = 0;
            for (int j = 0; j < 4; ++j) {
                if (j == col) continue;
                minor[i - 1][jj++] = m[i][j];
            }
        }
        const real50 term = m[0][col] * det3hp(minor);
        total += (col % 2 == 0) ? term : -term;
    }
    return total;
}

// ((x+1)/2) log2((x+1)/2) - ((x-1)/2) log2((x-1)/2), clamped at x = 1.
real50 entropy_hp(const real50& x) {
    static const real50 log2v = boost::multiprecision::log(real50(2));
    if (x < real50(1) - real50("1e-9")) {
        throw DomainError("entropy argument below 1 in high-precision path");
    }
    if (x <= 1) return 0;
    const real50 up = (x + 1) / 2;
    const real50 dn = (x - 1) / 2;
    return (up * boost::multiprecision::log(up) - dn * boost::multiprecision::log(dn)) / log2v;
}

real50 sqrt_clamped(const real50& v, const char* label) {
    if (v < 0) {
        if (v < real50("-1e-9")) {
            throw NumericalError("negative radicand (" + std::string(label) +
                                 ") in high-precision discord", static_cast<double>(v));
        }
        return 0;
    }
    return boost::multiprecision::sqrt(v);
}

}  // namespace

CovarianceMatrix make_tmsv(double r) {
    if (!std::isfinite(r)) {
        throw StructuralError("squeezing parameter must be finite");
    }
    Matrix v(4, 4);
    const double c = std::cosh(2.0 * r) / 2.0;
    const double s = std::sinh(2.0 * r) / 2.0;
    v << c, 0, s, 0,
         0, c, 0, -s,
         s, 0, c, 0,
         0, -s, 0, c;
    return CovarianceMatrix(std::move(v));
}

CovarianceMatrix random_physical_cm(int n_modes, std::uint64_t seed) {
    if (n_modes < 1) {
        throw StructuralError("mode count must be positive");
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> occupation(0.0, 2.0);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * 3.14159265358979323846);
    std::uniform_real_distribution<double> squeeze(0.0, 0.8);

    const int d = 2 * n_modes;
    Matrix core = Matrix::Zero(d, d);
    for (int k = 0; k < n_modes; ++k) {
        const double nu = occupation(rng) + 0.5;
        core(2 * k, 2 * k) = nu;
        core(2 * k + 1, 2 * k + 1) = nu;
    }

    Matrix s = Matrix::Identity(d, d);
    for (int layer = 0; layer < 2; ++layer) {
        for (int k = 0; k < n_modes; ++k) {
            const double th = angle(rng);
            Eigen::Matrix2d rot;
            rot << std::cos(th), std::sin(th), -std::sin(th), std::cos(th);
            s = embed_one_mode(n_modes, k, rot) * s;
        }
        for (int k = 0; k < n_modes; ++k) {
            const double r = squeeze(rng);
            Eigen::Matrix2d sq;
            sq << std::exp(r), 0.0, 0.0, std::exp(-r);
            s = embed_one_mode(n_modes, k, sq) * s;
        }
        for (int k = 0; k + 1 < n_modes; ++k) {
            s = beam_splitter(n_modes, k, k + 1, angle(rng)) * s;
        }
    }
    for (int k = 0; k < n_modes; ++k) {
        const double th = angle(rng);
        Eigen::Matrix2d rot;
        rot << std::cos(th), std::sin(th), -std::sin(th), std::cos(th);
        s = embed_one_mode(n_modes, k, rot) * s;
    }

    Matrix v = s * core * s.transpose();
    v = 0.5 * (v + v.transpose()).eval();
    return CovarianceMatrix(std::move(v));
}

double highprec_discord(const CovarianceMatrix& cm, int measured_mode) {
    if (cm.n_modes() != 2) {
        throw StructuralError("discord requires a two-mode state");
    }
    if (measured_mode != 1 && measured_mode != 2) {
        throw StructuralError("measured mode must be 1 or 2");
    }

    real50 m[4][4];
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) m[i][j] = real50(cm.matrix()(i, j));
    }

    const int a0 = (measured_mode == 1) ? 0 : 2;  // measured mode offset
    const int b0 = (measured_mode == 1) ? 2 : 0;

    const real50 s1 = 4 * det2hp(m[a0][a0], m[a0][a0 + 1], m[a0 + 1][a0], m[a0 + 1][a0 + 1]);
    const real50 s2 = 4 * det2hp(m[b0][b0], m[b0][b0 + 1], m[b0 + 1][b0], m[b0 + 1][b0 + 1]);
    const real50 s3 = 4 * det2hp(m[a0][b0], m[a0][b0 + 1], m[a0 + 1][b0], m[a0 + 1][b0 + 1]);
    const real50 s4 = 16 * det4hp(m);

    const real50 sd = s1 + s2 + 2 * s3;
    const real50 disc = sqrt_clamped(sd * sd - 4 * s4, "symplectic discriminant");
    const real50 lm = sqrt_clamped((sd - disc) / 2, "smaller invariant");
    const real50 lp = sqrt_clamped((sd + disc) / 2, "larger invariant");

    real50 eps;
    if (s1 - 1 < real50("1e-30")) {
        // Pure measured mode: the state factorises and conditioning is trivial.
        eps = s2;
    } else {
        const real50 lhs = (s4 - s2 * s1) * (s4 - s2 * s1);
        const real50 rhs = (1 + s1) * s3 * s3 * (s2 + s4);
        if (lhs <= rhs) {
            const real50 root =
                sqrt_clamped(s3 * s3 + (s1 - 1) * (s4 - s2), "conditional branch radicand");
            eps = (2 * s3 * s3 + (s1 - 1) * (s4 - s2) +
                   2 * boost::multiprecision::abs(s3) * root) /
                  ((s1 - 1) * (s1 - 1));
        } else {
            const real50 arg = s3 * s3 * s3 * s3 + (s4 - s2 * s1) * (s4 - s2 * s1) -
                               2 * s3 * s3 * (s4 + s2 * s1);
            eps = (s2 * s1 - s3 * s3 + s4 - sqrt_clamped(arg, "general branch radicand")) /
                  (2 * s1);
        }
    }

    const real50 discord = entropy_hp(sqrt_clamped(s1, "measured purity")) - entropy_hp(lm) -
                           entropy_hp(lp) + entropy_hp(sqrt_clamped(eps, "conditional purity"));
    if (discord < 0 && discord > real50("-1e-9")) return 0.0;
    return static_cast<double>(discord);
}

}  // namespace becbell::oracles
