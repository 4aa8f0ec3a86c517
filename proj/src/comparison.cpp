#include "leaky/comparison.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "leaky/spectral.hpp"

namespace leaky {
namespace {

// Trace of the one-period transfer matrix of u_{i+1} = (2 + h^2 (V_i - lambda)) u_i - u_{i-1}.
// Twisted eigenvalues are the roots of discriminant(lambda) = 2 cos(phi).
double discriminant(const std::vector<double>& potential, double h, double lambda) {
    double a = 1.0, b = 0.0;  // T applied to (1, 0)
    double c = 0.0, d = 1.0;  // T applied to (0, 1)
    for (double v : potential) {
        const double t = 2.0 + h * h * (v - lambda);
        const double a1 = t * a - b;
        const double c1 = t * c - d;
        b = a;
        a = a1;
        d = c;
        c = c1;
    }
    return a + d;
}

// Dense eigenvalues carry rounding of order eps * ||A|| ~ eps / h^2; simple ones are re-solved on the discriminant.
void polish_twisted(Eigen::VectorXd& values, int count, const std::vector<double>& potential, double h, double phi) {
    const double target = 2.0 * std::cos(phi);
    auto f = [&](double lambda) { return discriminant(potential, h, lambda) - target; };
    for (int j = 0; j < count; ++j) {
        const double mu = values[j];
        const double delta = 1e-7 * std::max(1.0, std::fabs(mu));
        const double prev = j > 0 ? values[j - 1] : -INFINITY;
        const double next = j + 1 < values.size() ? values[j + 1] : INFINITY;
        if (mu - prev < 4.0 * delta || next - mu < 4.0 * delta) continue;
        const double lo = mu - delta;
        const double hi = mu + delta;
        const double f_lo = f(lo);
        const double f_hi = f(hi);
        if (f_lo < 0.0 && f_hi > 0.0) {
            values[j] = refine_root(f, lo, hi);
        } else if (f_lo > 0.0 && f_hi < 0.0) {
            values[j] = refine_root([&](double x) { return -f(x); }, lo, hi);
        }
    }
}

}  // namespace

void ComparisonProblem::validate() const {
    if (!curvature) throw std::invalid_argument("comparison: curvature profile missing");
    if (!(length > 0.0) || !std::isfinite(length)) throw std::invalid_argument("comparison: length must be positive");
    if (grid < 64) throw std::invalid_argument("comparison: grid must have at least 64 cells");
    if (!std::isfinite(bc.phase)) throw std::invalid_argument("comparison: phase must be finite");
    if (bc.twisted() && std::fabs(curvature(0.0) - curvature(length)) > 1e-8) {
        throw std::invalid_argument("comparison: curvature is not periodic");
    }
}

std::vector<double> discretized_eigs(const ComparisonProblem& problem, int j_max) {
    problem.validate();
    const int m = problem.grid;
    if (j_max < 1 || j_max > m / 4) throw std::invalid_argument("comparison: j_max outside [1, M/4]");
    const double h = problem.length / m;
    const double inv_h2 = 1.0 / (h * h);
    auto potential = [&](double s) {
        const double k = problem.curvature(s);
        return -0.25 * k * k;
    };
    Eigen::VectorXd values;
    if (problem.bc.twisted()) {
        // u(s + L) = e^{i phi} u(s), folded into the corners
        const double phi = problem.bc.kind == BoundaryKind::periodic ? 0.0 : std::remainder(problem.bc.phase, 2.0 * std::numbers::pi);
        const std::complex<double> twist = std::polar(1.0, phi);
        Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(m, m);
        for (int i = 0; i < m; ++i) {
            a(i, i) = 2.0 * inv_h2 + potential(i * h);
            if (i + 1 < m) {
                a(i, i + 1) = -inv_h2;
                a(i + 1, i) = -inv_h2;
            }
        }
        a(m - 1, 0) += -inv_h2 * twist;
        a(0, m - 1) += -inv_h2 * std::conj(twist);
        values = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(a, Eigen::EigenvaluesOnly).eigenvalues();
        std::vector<double> v(static_cast<std::size_t>(m));
        for (int i = 0; i < m; ++i) v[std::size_t(i)] = potential(i * h);
        polish_twisted(values, std::min(j_max + 1, m), v, h, phi);
    } else {
        // Dirichlet: interior vertices; Neumann: cell centres with mirrored ghosts
        const bool dirichlet = problem.bc.kind == BoundaryKind::dirichlet;
        const int n = dirichlet ? m - 1 : m;
        Eigen::VectorXd diag(n);
        Eigen::VectorXd sub = Eigen::VectorXd::Constant(n - 1, -inv_h2);
        for (int i = 0; i < n; ++i) {
            const double s = dirichlet ? (i + 1) * h : (i + 0.5) * h;
            diag[i] = 2.0 * inv_h2 + potential(s);
        }
        if (!dirichlet) {
            diag[0] -= inv_h2;
            diag[n - 1] -= inv_h2;
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
        solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
        values = solver.eigenvalues();
    }
    return {values.data(), values.data() + j_max};
}

std::vector<double> comparison_eigs(const ComparisonProblem& problem, int j_max) {
    ComparisonProblem fine = problem;
    fine.grid = 2 * problem.grid;
    const std::vector<double> coarse_values = discretized_eigs(problem, j_max);
    const std::vector<double> fine_values = discretized_eigs(fine, j_max);
    std::vector<double> out(static_cast<std::size_t>(j_max));
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = (4.0 * fine_values[j] - coarse_values[j]) / 3.0;
    return out;
}

ComparisonProblem curve_problem(const ArcCurve& curve, Boundary bc, int grid) {
    if (!curve.corners().empty()) throw std::invalid_argument("comparison: curve must be smooth");
    if (bc.twisted() && !curve.closed()) throw std::invalid_argument("comparison: periodic conditions need a closed curve");
    ComparisonProblem p;
    p.curvature = [curve](double s) { return curve.curvature(std::clamp(s, 0.0, curve.length())); };
    p.length = curve.length();
    p.bc = bc;
    p.grid = grid;
    return p;
}

double strong_coupling_predict(const ArcCurve& curve, double alpha, int j, BoundaryKind bc) {
    if (!(alpha > 0.0)) throw std::invalid_argument("strong coupling: alpha must be positive");
    if (j < 1) throw std::invalid_argument("strong coupling: j counts from 1");
    const ComparisonProblem p = curve_problem(curve, {bc, 0.0});
    return -0.25 * alpha * alpha + comparison_eigs(p, j).back();
}

BandStructure band_structure(const std::function<double(double)>& curvature, double period, const std::vector<double>& thetas,
                             int j_max, int grid) {
    if (thetas.empty()) throw std::invalid_argument("band structure: empty theta grid");
    BandStructure out;
    out.thetas = thetas;
    for (double theta : thetas) {
        ComparisonProblem p{curvature, period, {BoundaryKind::floquet, theta}, grid};
        out.values.push_back(comparison_eigs(p, j_max));
    }
    double scale = 1.0;
    for (int j = 0; j < j_max; ++j) {
        Band b{out.values[0][std::size_t(j)], out.values[0][std::size_t(j)]};
        for (const auto& v : out.values) {
            b.bottom = std::min(b.bottom, v[std::size_t(j)]);
            b.top = std::max(b.top, v[std::size_t(j)]);
        }
        scale = std::max(scale, std::fabs(b.top));
        out.bands.push_back(b);
    }
    // touching bands differ only by discretization error
    const double resolution = 1e-7 * scale;
    for (int j = 0; j + 1 < j_max; ++j) {
        const double lower = out.bands[std::size_t(j)].top;
        const double upper = out.bands[std::size_t(j) + 1].bottom;
        if (upper - lower > resolution) out.gaps.push_back({j + 1, lower, upper});
    }
    return out;
}

std::vector<double> flux_dispersion(const ArcCurve& curve, double alpha, const std::vector<double>& fields, int j, int grid) {
    if (!curve.closed()) throw std::invalid_argument("flux: loop must be closed");
    if (!(alpha > 0.0)) throw std::invalid_argument("flux: alpha must be positive");
    if (j < 1) throw std::invalid_argument("flux: j counts from 1");
    if (curve.self_intersects()) throw std::invalid_argument("flux: loop self-intersects, enclosed area undefined");
    const double area = enclosed_area(curve);
    std::vector<double> out;
    for (double b : fields) {
        const ComparisonProblem p = curve_problem(curve, {BoundaryKind::flux, b * area}, grid);
        out.push_back(-0.25 * alpha * alpha + comparison_eigs(p, j).back());
    }
    return out;
}

}  // namespace leaky
