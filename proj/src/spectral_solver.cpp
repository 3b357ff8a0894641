#include "becbell/spectral_solver.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <queue>
#include <vector>

#include <Eigen/Dense>

namespace becbell {

namespace {

using Matrix4cd = Eigen::Matrix4cd;
using std::complex;

constexpr complex<double> kI{0.0, 1.0};
constexpr double kTwoPi = 2.0 * 3.14159265358979323846;

// Attaches the stated central frequency to the lower motional sideband;
// pinned by the location of the two-filter resonance maximum.
constexpr double kSidebandSign = 1.0;

// 15-point Kronrod rule with embedded 7-point Gauss rule (positive half).
constexpr double kXgk[8] = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691, 0.7415311855993944,
    0.5860872354676911, 0.4058451513773972, 0.2077849550078985, 0.0};
constexpr double kWgk[8] = {
    0.02293532201052922, 0.06309209262997855, 0.1047900103222502, 0.1406532597155259,
    0.1690047266392679,  0.1903505780647854,  0.2044329400752989, 0.2094821410847278};
constexpr double kWg[4] = {
    0.1294849661688697, 0.2797053914892767, 0.3818300505051189, 0.4179591836734694};

// Rates scaled so the cavity linewidth is 1; conditions the linear algebra.
struct ScaledModel {
    Eigen::Matrix4d a;
    Eigen::Vector4d d_diag;
    Eigen::Vector4d sigma_diag;  // per-row output scaling, identity on the condensate
    Eigen::Vector4d p_diag;
    double omega_center = 0.0;
    double tau = 0.0;
    bool with_filter = false;
};

complex<double> filter_transfer(double tau, double center, double w) {
    return std::sqrt(2.0 / tau) / complex<double>(1.0 / tau, center - w);
}

Matrix4cd integrand(const ScaledModel& m, double w) {
    Matrix4cd resolvent = (kI * w * Matrix4cd::Identity() + m.a.cast<complex<double>>()).inverse();
    resolvent += m.p_diag.cast<complex<double>>().asDiagonal();
    const Matrix4cd b = m.sigma_diag.cast<complex<double>>().asDiagonal() * resolvent;
    Matrix4cd s = b * m.d_diag.cast<complex<double>>().asDiagonal() * b.adjoint();
    if (!m.with_filter) return s;

    const complex<double> fp = filter_transfer(m.tau, m.omega_center, w);
    const complex<double> fm = std::conj(filter_transfer(m.tau, m.omega_center, -w));
    const complex<double> c = 0.5 * (fp + fm);
    const complex<double> d = (fp - fm) / (2.0 * kI);
    Matrix4cd y = Matrix4cd::Identity();
    y(2, 2) = c;
    y(2, 3) = -d;
    y(3, 2) = d;
    y(3, 3) = c;
    return y * s * y.adjoint();
}

enum class PanelKind { direct, tail_pos, tail_neg };

Matrix4cd mapped_integrand(const ScaledModel& m, PanelKind kind, double window, double t) {
    switch (kind) {
        case PanelKind::direct:
            return integrand(m, t);
        case PanelKind::tail_pos:
            return integrand(m, window / t) * (window / (t * t));
        case PanelKind::tail_neg:
        default:
            return integrand(m, -window / t) * (window / (t * t));
    }
}

struct Panel {
    double a = 0.0;
    double b = 0.0;
    PanelKind kind = PanelKind::direct;
    Matrix4cd value = Matrix4cd::Zero();
    double error = 0.0;
};

Panel eval_panel(const ScaledModel& m, double window, PanelKind kind, double a, double b) {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);

    const Matrix4cd fc = mapped_integrand(m, kind, window, mid);
    Matrix4cd ksum = kWgk[7] * fc;
    Matrix4cd gsum = kWg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        const Matrix4cd f1 = mapped_integrand(m, kind, window, mid - dx);
        const Matrix4cd f2 = mapped_integrand(m, kind, window, mid + dx);
        ksum += kWgk[j] * (f1 + f2);
        if (j % 2 == 1) gsum += kWg[(j - 1) / 2] * (f1 + f2);
    }

    Panel panel;
    panel.a = a;
    panel.b = b;
    panel.kind = kind;
    panel.value = half * ksum;
    panel.error = (half * (ksum - gsum)).cwiseAbs().maxCoeff();
    return panel;
}

struct IntegralResult {
    Eigen::Matrix4d value;
    double error = 0.0;
};

// Adaptive refinement over the central window plus inverse-mapped tails.
// The tails matter: the filter transfer decays only as 1/w, so truncating
// at the window leaves errors far above the target tolerance.
IntegralResult integrate_spectrum(const ScaledModel& m, double window, double tol) {
    std::vector<double> cuts = {-window, 0.0, window};
    const double hints[] = {m.omega_center, -m.omega_center};
    for (double h : hints) {
        if (std::abs(h) > 0.0 && std::abs(h) < window) cuts.push_back(h);
    }
    Eigen::EigenSolver<Eigen::Matrix4d> es(m.a, false);
    for (int i = 0; i < 4; ++i) {
        const double h = es.eigenvalues()(i).imag();
        if (std::abs(h) > 0.0 && std::abs(h) < window) cuts.push_back(h);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    auto by_error = [](const Panel& lhs, const Panel& rhs) { return lhs.error < rhs.error; };
    std::priority_queue<Panel, std::vector<Panel>, decltype(by_error)> queue(by_error);

    Matrix4cd total = Matrix4cd::Zero();
    double total_error = 0.0;
    auto push = [&](Panel&& panel) {
        total += panel.value;
        total_error += panel.error;
        queue.push(std::move(panel));
    };

    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        push(eval_panel(m, window, PanelKind::direct, cuts[i], cuts[i + 1]));
    }
    push(eval_panel(m, window, PanelKind::tail_pos, 0.0, 1.0));
    push(eval_panel(m, window, PanelKind::tail_neg, 0.0, 1.0));

    const double target = 0.25 * tol * kTwoPi;
    constexpr int kMaxPanels = 3000;
    int panels = static_cast<int>(queue.size());
    while (total_error > target && panels < kMaxPanels) {
        Panel worst = queue.top();
        queue.pop();
        total -= worst.value;
        total_error -= worst.error;
        const double mid = 0.5 * (worst.a + worst.b);
        push(eval_panel(m, window, worst.kind, worst.a, mid));
        push(eval_panel(m, window, worst.kind, mid, worst.b));
        ++panels;
    }

    IntegralResult result;
    result.error = total_error / kTwoPi;
    if (result.error > tol) {
        throw NumericalError("spectral quadrature did not reach the requested tolerance",
                             result.error);
    }
    result.value = total.real() / kTwoPi;
    return result;
}

ScaledModel scale_model(const LinearModel& model) {
    ScaledModel scaled;
    scaled.a = model.a / model.kappa;
    scaled.d_diag = model.d_diag / model.kappa;
    scaled.p_diag = model.p_diag * model.kappa;
    scaled.sigma_diag = Eigen::Vector4d::Ones();
    return scaled;
}

void require_stable(const LinearModel& model) {
    if (!is_stable(model)) {
        throw DomainError("stationary covariance requested for an unstable model");
    }
}

CovarianceMatrix finalize(Eigen::Matrix4d v, double tol) {
    const double asym = (v - v.transpose()).cwiseAbs().maxCoeff();
    if (asym > 10.0 * tol) {
        throw NumericalError("frequency integral produced an asymmetric covariance", asym);
    }
    Matrix sym = 0.5 * (v + v.transpose());
    return CovarianceMatrix(std::move(sym));
}

}  // namespace

double FilterSpec::epsilon() const { return std::abs(central_freq_per_s) * tau_s; }

NodeCM filtered_node_cm(const LinearModel& model, const FilterSpec& filter, double tol) {
    require_stable(model);
    if (!(tol > 0.0)) {
        throw DomainError("quadrature tolerance must be positive");
    }
    if (!(filter.tau_s > 0.0) || !std::isfinite(filter.tau_s)) {
        throw DomainError("filter inverse bandwidth must be positive and finite");
    }

    ScaledModel scaled = scale_model(model);
    scaled.sigma_diag << 1.0, 1.0, std::sqrt(2.0), std::sqrt(2.0);
    scaled.omega_center = kSidebandSign * filter.central_freq_per_s / model.kappa;
    scaled.tau = filter.tau_s * model.kappa;
    scaled.with_filter = true;

    const double delta = std::abs(scaled.a(2, 3));
    const double bec_freq = std::abs(scaled.a(0, 1));
    const double window =
        20.0 * std::max({1.0, delta, bec_freq,
                         std::abs(scaled.omega_center) + 10.0 / scaled.tau});

    const IntegralResult integral = integrate_spectrum(scaled, window, tol);
    NodeCM node{finalize(integral.value, tol), integral.error};
    const PhysicalityReport report = validate(node.cm);
    if (!report.physical) {
        throw NumericalError("filtered covariance violates the uncertainty relation",
                             report.worst_eigenvalue);
    }
    return node;
}

CovarianceMatrix lyapunov_steady_cm(const LinearModel& model) {
    require_stable(model);
    const Eigen::Matrix4d a = model.a / model.kappa;
    const Eigen::Matrix4d d = (model.d_diag / model.kappa).asDiagonal();

    // Vectorized system (I kron A + A kron I) vec(V) = -vec(D).
    Eigen::Matrix<double, 16, 16> coeff = Eigen::Matrix<double, 16, 16>::Zero();
    Eigen::Matrix<double, 16, 1> rhs;
    for (int col = 0; col < 4; ++col) {
        for (int row = 0; row < 4; ++row) {
            const int idx = 4 * col + row;
            rhs(idx) = -d(row, col);
            for (int k = 0; k < 4; ++k) {
                coeff(idx, 4 * col + k) += a(row, k);
                coeff(idx, 4 * k + row) += a(col, k);
            }
        }
    }
    const Eigen::Matrix<double, 16, 1> sol = coeff.partialPivLu().solve(rhs);

    Eigen::Matrix4d v;
    for (int col = 0; col < 4; ++col) {
        for (int row = 0; row < 4; ++row) v(row, col) = sol(4 * col + row);
    }
    Matrix sym = 0.5 * (v + v.transpose());
    return CovarianceMatrix(std::move(sym));
}

CovarianceMatrix unfiltered_frequency_cm(const LinearModel& model, double tol) {
    require_stable(model);
    if (!(tol > 0.0)) {
        throw DomainError("quadrature tolerance must be positive");
    }
    ScaledModel scaled = scale_model(model);
    scaled.p_diag.setZero();

    const double delta = std::abs(scaled.a(2, 3));
    const double bec_freq = std::abs(scaled.a(0, 1));
    const double window = 20.0 * std::max({1.0, delta, bec_freq});

    const IntegralResult integral = integrate_spectrum(scaled, window, tol);
    return finalize(integral.value, tol);
}

}  // namespace becbell
