#include "leaky/krein_points.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "leaky/greens.hpp"

namespace leaky {
namespace {

double green(int dimension, double kappa, double r) {
    return dimension == 2 ? green2(kappa, r) : green3(kappa, r);
}

double diameter(const PointArray& array) {
    double d = 0.0;
    for (std::size_t i = 0; i < array.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) d = std::max(d, array.distance(i, j));
    }
    return d;
}

Vec3 lift(const Vec2& p) { return Vec3(p.x(), p.y(), 0.0); }

}  // namespace

KreinSystem build_krein(const PointArray& array, double kappa) {
    if (!(kappa > 0.0) || !std::isfinite(kappa)) throw std::domain_error("build_krein: kappa must be positive");
    array.validate();
    const int n = int(array.size());
    const double diag = xi(array.dimension, kappa);
    KreinSystem out{array, kappa, Eigen::MatrixXd(n, n)};
    for (int i = 0; i < n; ++i) {
        out.matrix(i, i) = array.alphas[i] - diag;
        for (int j = 0; j < i; ++j) {
            const double g = -green(array.dimension, kappa, array.distance(i, j));
            out.matrix(i, j) = g;
            out.matrix(j, i) = g;
        }
    }
    return out;
}

Eigen::VectorXd krein_eigenvalues(const PointArray& array, double kappa) {
    const KreinSystem system = build_krein(array, kappa);
    if (system.matrix.rows() == 1) return system.matrix.col(0);
    return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(system.matrix, Eigen::EigenvaluesOnly).eigenvalues();
}

SpectralResult point_spectrum(const PointArray& array, int j_max, double tol) {
    check_tolerance(tol);
    array.validate();
    const int n = int(array.size());
    SpectralResult result;
    result.method = "krein";
    result.coupling = std::all_of(array.alphas.begin(), array.alphas.end(), [&](double a) { return a == array.alphas[0]; })
                          ? array.alphas[0]
                          : std::numeric_limits<double>::quiet_NaN();
    result.threshold = 0.0;
    for (const Vec3& p : array.points) result.support.push_back({p, 1.0, -1, 0.0});

    // In 2D the branches that bind have a finite negative limit at kappa -> 0 except the lowest,
    // which diverges; the floor sits well below every single-point scale.
    const double scale = 1.0 + diameter(array);
    double floor = 1e-9 / scale;
    if (array.dimension == 2) {
        for (double a : array.alphas) floor = std::min(floor, 1e-3 * xi_inverse(2, a));
    }
    floor = std::max(floor, 1e-300);

    CrossingSearch search;
    search.branches = [&](double kappa) -> Eigen::VectorXd { return -krein_eigenvalues(array, kappa); };
    search.level = 0.0;
    search.kappa_floor = floor;
    search.j_max = std::min(j_max, n);
    search.tol = tol;
    const std::vector<Crossing> crossings = solve_crossings(search);

    for (std::size_t j = 0; j < crossings.size(); ++j) {
        const Crossing& c = crossings[j];
        auto branch = [&](double kappa) { return krein_eigenvalues(array, kappa)[Eigen::Index(j)]; };
        const double kappa = refine_root(branch, c.lower, c.upper);
        const KreinSystem system = build_krein(array, kappa);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(system.matrix);
        Eigen::VectorXd d = eig.eigenvectors().col(Eigen::Index(j));
        if (d.sum() < 0.0 || (std::fabs(d.sum()) < 1e-12 && d[0] < 0.0)) d = -d;
        BoundState state;
        state.index = int(j) + 1;
        state.kappa = kappa;
        state.energy = -kappa * kappa;
        state.coefficients = d;
        state.residual = std::fabs(eig.eigenvalues()[Eigen::Index(j)]);
        result.states.push_back(std::move(state));
    }
    flag_multiplicities(result.states, tol);
    return result;
}

double point_eigenfunction(const PointArray& array, const BoundState& state, const Vec3& x) {
    if (state.coefficients.size() != Eigen::Index(array.size())) throw std::invalid_argument("state does not belong to this array");
    double sum = 0.0;
    for (std::size_t j = 0; j < array.size(); ++j) {
        Vec3 diff = x - array.points[j];
        if (array.dimension == 2) diff.z() = 0.0;
        const double r = diff.norm();
        if (!(r > 1e-14 * (1.0 + array.points[j].norm()))) throw std::domain_error("point_eigenfunction: x is a singular point");
        sum += state.coefficients[Eigen::Index(j)] * green(array.dimension, state.kappa, r);
    }
    return sum;
}

PointArray approximate_graph(const LeakyGraph& graph, double alpha, int n) {
    if (!(alpha > 0.0)) throw std::invalid_argument("approximate_graph: alpha must be positive");
    if (graph.has_leads()) throw std::invalid_argument("approximate_graph: graph must have finite length");
    const auto& edges = graph.edges();
    const double total = graph.total_length();
    const int m = int(edges.size());
    if (n < 2 * m) throw std::invalid_argument("approximate_graph: need at least two points per edge");
    // largest-remainder allocation in proportion to length
    std::vector<int> counts(m);
    std::vector<std::pair<double, int>> remainders;
    int assigned = 0;
    for (int e = 0; e < m; ++e) {
        const double share = n * edges[e].curve.length() / total;
        counts[e] = int(std::floor(share));
        assigned += counts[e];
        remainders.push_back({share - counts[e], e});
    }
    std::sort(remainders.begin(), remainders.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    for (int k = 0; assigned < n; ++k, ++assigned) ++counts[remainders[std::size_t(k)].second];
    for (int c : counts) {
        if (c < 2) throw std::invalid_argument("approximate_graph: n too small to cover all edges");
    }
    PointArray out;
    out.dimension = 2;
    const double coupling = n / (alpha * total);
    for (int e = 0; e < m; ++e) {
        const ArcCurve& curve = edges[e].curve;
        const double spacing = curve.length() / counts[e];
        for (int k = 0; k < counts[e]; ++k) {
            out.points.push_back(lift(curve.point((k + 0.5) * spacing)));
            out.alphas.push_back(coupling);
        }
    }
    out.validate();
    return out;
}

void PolymerParams::validate() const {
    if (dimension != 2 && dimension != 3) throw std::invalid_argument("polymer: dimension must be 2 or 3");
    if (!(spacing > 0.0) || !std::isfinite(spacing)) throw std::invalid_argument("polymer: spacing must be positive");
    if (!std::isfinite(alpha)) throw std::invalid_argument("polymer: alpha must be finite");
}

double renormalized_sum_g(double kappa, double theta, double spacing) {
    if (!(kappa > 0.0)) throw std::domain_error("renormalized_sum_g: kappa must be positive");
    if (!(spacing > 0.0)) throw std::domain_error("renormalized_sum_g: spacing must be positive");
    const double a = theta * spacing / (2.0 * std::numbers::pi);
    const double c = kappa * spacing / (2.0 * std::numbers::pi);
    auto f = [c](double x) { return 1.0 / std::hypot(x, c); };
    auto df = [c](double x) {
        const double r = std::hypot(x, c);
        return -x / (r * r * r);
    };
    // partial sum through N plus the Euler-Maclaurin tail, which absorbs the -ln N
    auto estimate = [&](int big_n, double partial) {
        const double nn = big_n;
        const double h = 0.5 * (f(nn + a) + f(nn - a));
        const double dh = 0.5 * (df(nn + a) + df(nn - a));
        // ln(2N/c) - (1/2)[asinh((N + a)/c) + asinh((N - a)/c)], written without cancellation
        const double log_part = -0.5 * (std::log(((nn + a) + std::hypot(nn + a, c)) / (2.0 * nn)) +
                                        std::log(((nn - a) + std::hypot(nn - a, c)) / (2.0 * nn)));
        return (partial + log_part - std::log(nn) - 0.5 * h - dh / 12.0) / (2.0 * std::numbers::pi);
    };
    int big_n = 64;
    while (big_n < 4.0 * (c + std::fabs(a))) big_n *= 2;
    double partial = 0.5 * f(a);
    int summed = 0;
    auto extend = [&](int to) {
        for (int k = summed + 1; k <= to; ++k) partial += 0.5 * (f(k + a) + f(-k + a));
        summed = to;
    };
    extend(big_n);
    double previous = estimate(big_n, partial);
    for (int iter = 0; iter < 20; ++iter) {
        big_n *= 2;
        extend(big_n);
        const double current = estimate(big_n, partial);
        const double richardson = (16.0 * current - previous) / 15.0;
        if (std::fabs(current - previous) < 1e-11 * std::max(1.0, std::fabs(current))) return richardson;
        previous = current;
    }
    throw SolverError("renormalized_sum_g: lattice sum did not converge");
}

double polymer_threshold(const PolymerParams& params) {
    params.validate();
    const double l = params.spacing;
    if (params.dimension == 3) {
        const double u = std::exp(-2.0 * std::numbers::pi * params.alpha * l);
        const double bracket = std::isfinite(u) ? std::log1p(0.5 * u * u + u * std::sqrt(1.0 + 0.25 * u * u))
                                                : 2.0 * (-2.0 * std::numbers::pi * params.alpha * l);
        return -(bracket * bracket) / (l * l);
    }
    // alpha + (1/2pi)(gamma + ln(2pi/l)) = g(kappa, 0); g decreases from +inf to -inf
    const double rhs = params.alpha + (kEulerGamma + std::log(2.0 * std::numbers::pi / l)) / (2.0 * std::numbers::pi);
    auto f = [&](double log_kappa) { return rhs - renormalized_sum_g(std::exp(log_kappa), 0.0, l); };
    double lo = std::log(1.0 / l);
    double hi = lo;
    for (int i = 0; f(lo) > 0.0; ++i) {
        if (i > 200) throw SolverError("polymer_threshold: bracket not found");
        hi = lo;
        lo -= 2.0;
    }
    for (int i = 0; f(hi) < 0.0; ++i) {
        if (i > 200) throw SolverError("polymer_threshold: bracket not found");
        lo = hi;
        hi += 2.0;
    }
    const double log_kappa = refine_root(f, lo, hi);
    return -std::exp(2.0 * log_kappa);
}

PointArray straight_array(const PolymerParams& params, int n) {
    params.validate();
    if (n < 1) throw std::invalid_argument("straight_array: need at least one point");
    PointArray out;
    out.dimension = params.dimension;
    for (int j = 0; j < n; ++j) {
        out.points.push_back(Vec3((j - 0.5 * (n - 1)) * params.spacing, 0.0, 0.0));
        out.alphas.push_back(params.alpha);
    }
    return out;
}

PointArray bent_array(const PolymerParams& params, int n, double turn) {
    params.validate();
    if (n < 3) throw std::invalid_argument("bent_array: need at least three points");
    if (!(std::fabs(turn) < std::numbers::pi)) throw std::invalid_argument("bent_array: turn must lie in (-pi, pi)");
    PointArray out;
    out.dimension = params.dimension;
    const int left = (n - 1) / 2;
    const Vec3 dir(std::cos(turn), std::sin(turn), 0.0);
    for (int j = left; j >= 1; --j) out.points.push_back(Vec3(-j * params.spacing, 0.0, 0.0));
    for (int j = 0; j < n - left; ++j) out.points.push_back(j * params.spacing * dir);
    out.alphas.assign(out.points.size(), params.alpha);
    return out;
}

double polymer_extrapolate(const PolymerParams& params, const std::vector<int>& counts) {
    if (counts.size() != 3) throw std::invalid_argument("polymer_extrapolate: three array sizes required");
    Eigen::Matrix3d design;
    Eigen::Vector3d energies;
    for (int i = 0; i < 3; ++i) {
        const SpectralResult r = point_spectrum(straight_array(params, counts[i]), 1, 1e-10);
        if (r.states.empty()) throw SolverError("polymer_extrapolate: finite array has no bound state");
        const double n = counts[i];
        design.row(i) << 1.0, 1.0 / (n * n), 1.0 / (n * n * n);
        energies[i] = r.states[0].energy;
    }
    return design.fullPivLu().solve(energies)[0];
}

double polygon_ground_state(const ArcCurve& loop, int n, double alpha, int dimension) {
    if (n < 3) throw std::invalid_argument("polygon_ground_state: at least three sites required");
    PointArray array;
    array.dimension = dimension;
    for (const Vec2& p : loop_sites(loop, n)) array.points.push_back(lift(p));
    array.alphas.assign(array.points.size(), alpha);
    const SpectralResult r = point_spectrum(array, 1, 1e-10);
    if (r.states.empty()) throw SolverError("polygon_ground_state: no bound state for this coupling");
    return r.states[0].energy;
}

SpectralResult curved_polymer_bound_state(const PointArray& array, int j_max, double tol) {
    array.validate();
    const std::size_t n = array.size();
    if (n < 3) throw std::invalid_argument("curved polymer: at least three points required");
    const double spacing = array.distance(0, 1);
    for (std::size_t j = 0; j + 1 < n; ++j) {
        if (std::fabs(array.distance(j, j + 1) - spacing) > 1e-9 * spacing) {
            throw std::invalid_argument("curved polymer: points must be equally spaced");
        }
        if (array.alphas[j] != array.alphas[0]) throw std::invalid_argument("curved polymer: couplings must be equal");
    }
    bool collinear = true;
    const Vec3 dir = (array.points[n - 1] - array.points[0]).normalized();
    for (std::size_t j = 1; j + 1 < n && collinear; ++j) {
        collinear = (array.points[j] - array.points[0]).cross(dir).norm() <= 1e-9 * spacing * double(n);
    }
    if (collinear) throw std::invalid_argument("curved polymer: points are collinear");
    SpectralResult result = point_spectrum(array, j_max, tol);
    result.method = "krein-polymer";
    result.threshold = polymer_threshold({array.dimension, spacing, array.alphas[0]});
    const double resolution = 10.0 * tol * std::fabs(result.threshold);
    if (result.states.empty() || result.states[0].energy > result.threshold - resolution) {
        result.warnings.push_back("no state resolved below the polymer threshold; truncation may be too short");
    }
    return result;
}

}  // namespace leaky
