#include "leaky/line_defect.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "leaky/greens.hpp"
#include "leaky/quadrature.hpp"

namespace leaky {
namespace {

// kappa = alpha / 2 + gap; the gap is carried separately so that 2 tau - alpha keeps its digits near the threshold.
double correction_at_gap(double alpha, double gap, const Vec2& x, const Vec2& y) {
    if (alpha == 0.0) return 0.0;
    const double kappa = 0.5 * alpha + gap;
    const double shift = x.x() - y.x();
    const double height = std::fabs(x.y()) + std::fabs(y.y());
    if (!(height > 0.0)) throw std::domain_error("sigma kernel: both arguments on the line");
    const double offset = gap * (alpha + gap);  // kappa^2 - alpha^2 / 4
    auto integrand = [&](double p) {
        const double tau = std::hypot(p, kappa);
        const double excess = 2.0 * (p * p + offset) / (tau + 0.5 * alpha);  // 2 tau - alpha
        return std::cos(p * shift) * std::exp(-tau * height) / (tau * excess);
    };
    double upper = std::max(2.0 * alpha, 4.0 * kappa);
    while (std::exp(-upper * height) / (height * upper * (2.0 * upper - alpha)) > 1e-17) upper *= 2.0;
    std::vector<double> breaks;
    const double width = std::sqrt(offset);
    for (double b = 0.25 * width; b < upper; b *= 4.0) breaks.push_back(b);
    if (height < 1.0) {
        for (double b = 1.0 / height; b < upper; b *= 4.0) breaks.push_back(b);
    }
    const IntegrationResult r = integrate_adaptive(integrand, 0.0, upper, 1e-14, 1e-12, breaks, 40000);
    if (!(r.error <= 1e-9 * std::max(1.0, std::fabs(r.value)))) {
        std::ostringstream msg;
        msg << "sigma kernel quadrature did not converge (alpha=" << alpha << ", kappa=" << kappa << ", x=(" << x.x() << ","
            << x.y() << "), y=(" << y.x() << "," << y.y() << "), error=" << r.error << ")";
        throw SolverError(msg.str());
    }
    return alpha / (2.0 * std::numbers::pi) * r.value;
}

Eigen::MatrixXd matrix_at_gap(const LineDefectConfig& config, double gap) {
    const double kappa = 0.5 * config.alpha + gap;
    const int n = int(config.points.size());
    Eigen::MatrixXd m(n, n);
    const double diag = xi(2, kappa);
    for (int i = 0; i < n; ++i) {
        m(i, i) = config.betas[i] - diag - correction_at_gap(config.alpha, gap, config.points[i], config.points[i]);
        for (int j = 0; j < i; ++j) {
            const Vec2& a = config.points[i];
            const Vec2& b = config.points[j];
            const double value = -(green2(kappa, (a - b).norm()) + correction_at_gap(config.alpha, gap, a, b));
            m(i, j) = value;
            m(j, i) = value;
        }
    }
    return m;
}

Eigen::VectorXd ascending(const Eigen::MatrixXd& m) {
    if (m.rows() == 1) return m.col(0);
    return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m, Eigen::EigenvaluesOnly).eigenvalues();
}

void check_kappa(double alpha, double kappa) {
    if (!(kappa > 0.5 * alpha) || !std::isfinite(kappa)) {
        throw std::domain_error("sigma kernel: kappa must exceed alpha / 2 (energy below the line threshold)");
    }
}

}  // namespace

void LineDefectConfig::validate() const {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("line defect: delta-alpha must be positive");
    if (points.empty()) throw std::invalid_argument("line defect: no points");
    if (betas.size() != points.size()) throw std::invalid_argument("line defect: one point-alpha per point required");
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!points[i].allFinite() || !std::isfinite(betas[i])) throw std::invalid_argument("line defect: non-finite value");
        if (points[i].y() == 0.0) throw std::invalid_argument("line defect: point lies on the line");
        for (std::size_t j = 0; j < i; ++j) {
            if (points[i] == points[j]) throw std::invalid_argument("line defect: coincident points");
        }
    }
}

double sigma_correction(double alpha, double kappa, const Vec2& x, const Vec2& y) {
    if (!(alpha >= 0.0)) throw std::domain_error("sigma kernel: alpha must be non-negative");
    check_kappa(alpha, kappa);
    return correction_at_gap(alpha, kappa - 0.5 * alpha, x, y);
}

double sigma_kernel(double alpha, double kappa, const Vec2& x, const Vec2& y) {
    const double r = (x - y).norm();
    if (!(r > 0.0)) throw std::domain_error("sigma kernel: coincident arguments");
    return green2(kappa, r) + sigma_correction(alpha, kappa, x, y);
}

Eigen::MatrixXd line_defect_matrix(const LineDefectConfig& config, double kappa) {
    config.validate();
    check_kappa(config.alpha, kappa);
    return matrix_at_gap(config, kappa - 0.5 * config.alpha);
}

SpectralResult line_defect_spectrum(const LineDefectConfig& config, double tol) {
    check_tolerance(tol);
    config.validate();
    const double alpha = config.alpha;
    SpectralResult result;
    result.method = "line-defect";
    result.coupling = alpha;
    result.threshold = -0.25 * alpha * alpha;
    for (const Vec2& p : config.points) result.support.push_back({Vec3(p.x(), p.y(), 0.0), 1.0, -1, 0.0});

    // Branches increase with the gap kappa - alpha/2; the line term sends the lowest one to -inf at the threshold.
    CrossingSearch search;
    search.branches = [&](double gap) -> Eigen::VectorXd { return -ascending(matrix_at_gap(config, gap)); };
    search.level = 0.0;
    search.kappa_floor = 1e-12 * alpha;
    search.j_max = int(config.points.size());
    search.tol = tol;
    const std::vector<Crossing> crossings = solve_crossings(search);
    for (std::size_t j = 0; j < crossings.size(); ++j) {
        auto branch = [&](double gap) { return ascending(matrix_at_gap(config, gap))[Eigen::Index(j)]; };
        const double gap = refine_root(branch, crossings[j].lower, crossings[j].upper);
        const Eigen::MatrixXd m = matrix_at_gap(config, gap);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
        Eigen::VectorXd d = eig.eigenvectors().col(Eigen::Index(j));
        if (d.sum() < 0.0) d = -d;
        BoundState state;
        state.index = int(j) + 1;
        state.kappa = 0.5 * alpha + gap;
        state.energy = -state.kappa * state.kappa;
        state.coefficients = d;
        state.residual = std::fabs(eig.eigenvalues()[Eigen::Index(j)]);
        result.states.push_back(std::move(state));
    }
    if (result.states.empty()) result.warnings.push_back("no bound state resolved above the threshold floor");
    flag_multiplicities(result.states, tol);
    return result;
}

}  // namespace leaky
