#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Geometry>
#include <boost/math/special_functions/bessel.hpp>

#include "leaky/bs_core.hpp"
#include "leaky/greens.hpp"
#include "leaky/krein_points.hpp"

using namespace leaky;

namespace {

constexpr double pi = std::numbers::pi;

PointArray make_array(int dimension, std::vector<Vec3> points, double alpha) {
    PointArray a;
    a.dimension = dimension;
    a.points = std::move(points);
    a.alphas.assign(a.points.size(), alpha);
    return a;
}

}  // namespace

TEST_CASE("Krein matrix entries") {
    const PointArray one = make_array(2, {Vec3(0.3, -1.0, 0.0)}, 0.7);
    const KreinSystem k1 = build_krein(one, 1.3);
    REQUIRE(k1.matrix.rows() == 1);
    CHECK(k1.matrix(0, 0) == doctest::Approx(0.7 - xi(2, 1.3)).epsilon(1e-15));

    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int sample = 0; sample < 5; ++sample) {
        for (int dim : {2, 3}) {
            PointArray a;
            a.dimension = dim;
            for (int j = 0; j < 4; ++j) {
                a.points.push_back(Vec3(u(rng), u(rng), dim == 3 ? u(rng) : 0.0));
                a.alphas.push_back(u(rng));
            }
            const double kappa = 0.2 + std::fabs(u(rng));
            const KreinSystem k = build_krein(a, kappa);
            for (int i = 0; i < 4; ++i) {
                const double diag = dim == 2 ? a.alphas[i] + (std::log(kappa / 2.0) + kEulerGamma) / (2.0 * pi)
                                             : a.alphas[i] + kappa / (4.0 * pi);
                CHECK(k.matrix(i, i) == doctest::Approx(diag).epsilon(1e-13));
                for (int j = 0; j < 4; ++j) {
                    if (i == j) continue;
                    const double r = (a.points[i] - a.points[j]).norm();
                    const double g = dim == 2 ? boost::math::cyl_bessel_k(0, kappa * r) / (2.0 * pi)
                                              : std::exp(-kappa * r) / (4.0 * pi * r);
                    CHECK(k.matrix(i, j) == doctest::Approx(-g).epsilon(1e-13));
                    CHECK(k.matrix(i, j) < 0.0);
                }
            }
        }
    }
    CHECK_THROWS_AS(build_krein(make_array(2, {Vec3(1, 1, 0), Vec3(1, 1, 0)}, 0.0), 1.0), std::invalid_argument);
    CHECK_THROWS_AS(build_krein(one, 0.0), std::domain_error);
}

TEST_CASE("symmetric pair") {
    const PointArray pair = make_array(2, {Vec3(-0.4, 0.0, 0.0), Vec3(0.4, 0.0, 0.0)}, -0.1);
    const KreinSystem k = build_krein(pair, 2.0);
    Eigen::Matrix2d swap;
    swap << 0, 1, 1, 0;
    CHECK((swap * k.matrix - k.matrix * swap).norm() < 1e-15);
    const SpectralResult r = point_spectrum(pair, 4, 1e-10);
    REQUIRE(r.states.size() == 2);
    CHECK(r.states[0].coefficients[0] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
    CHECK(r.states[0].coefficients[1] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
    CHECK(r.states[1].coefficients[0] == doctest::Approx(-r.states[1].coefficients[1]).epsilon(1e-12));
    CHECK(r.states[0].energy < zeta_threshold(-0.1));
    CHECK(r.states[1].energy > zeta_threshold(-0.1));
    // mirror image of x gives the same ground-state value
    const Vec3 x(0.3, 0.7, 0.0);
    const Vec3 mirrored(-0.3, 0.7, 0.0);
    CHECK(point_eigenfunction(pair, r.states[0], x) == doctest::Approx(point_eigenfunction(pair, r.states[0], mirrored)).epsilon(1e-12));
    CHECK_THROWS_AS(point_eigenfunction(pair, r.states[0], pair.points[1]), std::domain_error);
}

TEST_CASE("single point spectra") {
    for (double alpha : {-1.0, 0.0, 1.0}) {
        const SpectralResult r = point_spectrum(make_array(2, {Vec3::Zero()}, alpha), 3, 1e-10);
        REQUIRE(r.states.size() == 1);
        const double zeta = -4.0 * std::exp(2.0 * (-2.0 * pi * alpha - kEulerGamma));
        CHECK(r.states[0].energy == doctest::Approx(zeta).epsilon(1e-12));
    }
    for (double alpha : {-0.5, -0.05}) {
        const SpectralResult r = point_spectrum(make_array(3, {Vec3::Zero()}, alpha), 3, 1e-10);
        REQUIRE(r.states.size() == 1);
        CHECK(r.states[0].energy == doctest::Approx(-std::pow(4.0 * pi * alpha, 2)).epsilon(1e-12));
    }
    CHECK(point_spectrum(make_array(3, {Vec3::Zero()}, 0.0), 3, 1e-10).states.empty());
    CHECK(point_spectrum(make_array(3, {Vec3::Zero()}, 0.4), 3, 1e-10).states.empty());
    CHECK_THROWS_AS(point_spectrum(make_array(2, {Vec3::Zero()}, 0.0), 1, 1e-2), std::invalid_argument);

    // psi is a multiple of K0(kappa r)
    const PointArray single = make_array(2, {Vec3(1.0, 2.0, 0.0)}, 0.1);
    const SpectralResult r = point_spectrum(single, 1, 1e-10);
    const double kappa = r.states[0].kappa;
    const double base = point_eigenfunction(single, r.states[0], Vec3(1.5, 2.0, 0.0)) / k0(0.5 * kappa);
    for (double t : {0.1, 1.0, 3.0}) {
        CHECK(point_eigenfunction(single, r.states[0], Vec3(1.0, 2.0 + t, 0.0)) == doctest::Approx(base * k0(t * kappa)).epsilon(1e-12));
    }
}

TEST_CASE("array spectra properties") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    PointArray a;
    a.dimension = 2;
    for (int j = 0; j < 6; ++j) {
        a.points.push_back(Vec3(u(rng), u(rng), 0.0));
        a.alphas.push_back(0.1 * u(rng));
    }
    // lowest Krein eigenvalue increases with kappa
    double previous = krein_eigenvalues(a, 0.01)[0];
    for (double kappa = 0.02; kappa < 50.0; kappa *= 1.5) {
        const double now = krein_eigenvalues(a, kappa)[0];
        CHECK(now > previous);
        previous = now;
    }
    const SpectralResult r = point_spectrum(a, 10, 1e-10);
    CHECK(r.states.size() >= 1);
    CHECK(r.states.size() <= a.size());
    for (const auto& s : r.states) {
        CHECK(s.residual < 1e-10);
        CHECK(krein_eigenvalues(a, s.kappa).cwiseAbs().minCoeff() < 1e-10);
    }
    // Euclidean motion
    PointArray moved = a;
    const Eigen::Rotation2Dd rot(0.83);
    for (auto& p : moved.points) {
        const Vec2 q = rot * Vec2(p.x(), p.y()) + Vec2(3.0, -7.0);
        p = Vec3(q.x(), q.y(), 0.0);
    }
    const SpectralResult rm = point_spectrum(moved, 10, 1e-10);
    REQUIRE(rm.states.size() == r.states.size());
    for (std::size_t j = 0; j < r.states.size(); ++j) {
        CHECK(std::fabs(rm.states[j].energy - r.states[j].energy) < 1e-12 * std::max(1.0, std::fabs(r.states[j].energy)));
    }
    // far-field decay along a ray
    const BoundState& g = r.states[0];
    const double r1 = 30.0 / g.kappa;
    const double r2 = 31.0 / g.kappa;
    const double rate = -std::log(point_eigenfunction(a, g, Vec3(r2, 0.2, 0)) / point_eigenfunction(a, g, Vec3(r1, 0.2, 0))) / (r2 - r1);
    CHECK(rate == doctest::Approx(g.kappa).epsilon(0.05));
}

TEST_CASE("point approximation of a graph") {
    LeakyGraph segment(2.0);
    segment.add_edge(ArcCurve::segment({0, 0}, {5, 0}));
    const PointArray a = approximate_graph(segment, 2.0, 100);
    REQUIRE(a.size() == 100);
    CHECK(a.alphas[0] == doctest::Approx(10.0).epsilon(1e-15));
    for (std::size_t j = 0; j + 1 < a.size(); ++j) CHECK(a.distance(j, j + 1) == doctest::Approx(0.05).epsilon(1e-12));
    CHECK(a.points[0].x() == doctest::Approx(0.025));
    CHECK_THROWS_AS(approximate_graph(segment, 2.0, 1), std::invalid_argument);
    LeakyGraph lead(2.0);
    lead.add_edge(ArcCurve::segment({0, 0}, {5, 0}), true, false);
    CHECK_THROWS_AS(approximate_graph(lead, 2.0, 20), std::invalid_argument);

    const double alpha = 5.0;
    LeakyGraph circle(alpha);
    circle.add_edge(ArcCurve::circle({0, 0}, 1.0 / (2.0 * pi)));
    const double reference = find_bound_states(circle, 1, 1e-10).states[0].energy;
    double previous = 1e300;
    for (int n : {16, 32, 64}) {
        const double gap = std::fabs(point_spectrum(approximate_graph(circle, alpha, n), 1, 1e-10).states[0].energy - reference);
        CHECK(gap < previous);
        previous = gap;
    }
}

TEST_CASE("renormalized lattice sum") {
    // theta = 0 against the Bessel lattice sum: g = (1/2pi)[2 sum_n K0(n kappa l) - ln(kappa l / 4pi)]
    for (double kappa : {0.3, 1.0, 4.0}) {
        for (double l : {0.5, 2.0}) {
            double sum = 0.0;
            for (int n = 1; n * kappa * l < 60.0; ++n) sum += boost::math::cyl_bessel_k(0, n * kappa * l);
            const double expected = (2.0 * sum - std::log(kappa * l / (4.0 * pi))) / (2.0 * pi);
            CHECK(renormalized_sum_g(kappa, 0.0, l) == doctest::Approx(expected).epsilon(1e-11));
        }
    }
    CHECK(renormalized_sum_g(1.1, 0.4, 1.3) == doctest::Approx(renormalized_sum_g(1.1, -0.4, 1.3)).epsilon(1e-14));
    double previous = renormalized_sum_g(0.05, 0.0, 1.0);
    for (double kappa = 0.1; kappa < 100.0; kappa *= 2.0) {
        const double now = renormalized_sum_g(kappa, 0.0, 1.0);
        CHECK(now < previous);
        previous = now;
    }
    CHECK_THROWS_AS(renormalized_sum_g(0.0, 0.0, 1.0), std::domain_error);
}

TEST_CASE("polymer thresholds") {
    CHECK(polymer_threshold({3, 1.0, 3.0}) < 0.0);
    CHECK(polymer_threshold({3, 1.0, 3.0}) > -1e-15);
    for (double alpha : {-0.2, 0.0, 0.3}) {
        const PolymerParams p{3, 1.0, alpha};
        const double closed = polymer_threshold(p);
        CHECK(closed < 0.0);
        CHECK(polymer_extrapolate(p, {50, 100, 200}) == doctest::Approx(closed).epsilon(1e-3));
        // finite arrays bind less than the infinite one
        CHECK(point_spectrum(straight_array(p, 50), 1, 1e-10).states[0].energy > closed);
    }
    for (double alpha : {-0.2, 0.0, 0.3}) {
        const PolymerParams p{2, 1.3, alpha};
        const double threshold = polymer_threshold(p);
        CHECK(threshold < zeta_threshold(alpha));
        CHECK(polymer_extrapolate(p, {50, 100, 200}) == doctest::Approx(threshold).epsilon(1e-5));
    }
    CHECK_THROWS_AS(polymer_threshold({4, 1.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(polymer_threshold({2, 0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("polygons") {
    const double length = 6.0;
    const ArcCurve circle = ArcCurve::circle({0, 0}, length / (2.0 * pi));
    const std::vector<Vec2> vertices = regular_polygon(8, length);
    const ArcCurve octagon = ArcCurve::polyline(vertices, true);
    CHECK(octagon.length() == doctest::Approx(length).epsilon(1e-14));
    PointArray regular;
    for (const Vec2& p : vertices) regular.points.push_back(Vec3(p.x(), p.y(), 0.0));
    regular.alphas.assign(8, 0.05);
    const SpectralResult r = point_spectrum(regular, 1, 1e-10);
    for (int j = 0; j < 8; ++j) CHECK(r.states[0].coefficients[j] == doctest::Approx(1.0 / std::sqrt(8.0)).epsilon(1e-10));
    const double best = polygon_ground_state(octagon, 8, 0.05);
    CHECK(best == doctest::Approx(r.states[0].energy).epsilon(1e-12));
    // sites on the circle of the same length sit closer together
    CHECK(best > polygon_ground_state(circle, 8, 0.05));

    const ArcCurve square = ArcCurve::polyline({{0, 0}, {1.5, 0}, {1.5, 1.5}, {0, 1.5}}, true);
    const ArcCurve skewed = ArcCurve::polyline({{0, 0}, {2.0, 0}, {1.7, 1.2}, {0.1, 0.9}}, true);
    CHECK(square.length() == doctest::Approx(length));
    CHECK(best > polygon_ground_state(square, 8, 0.05));
    const double scale = length / skewed.length();
    const ArcCurve skewed_scaled = ArcCurve::polyline({{0, 0}, {2.0 * scale, 0}, {1.7 * scale, 1.2 * scale}, {0.1 * scale, 0.9 * scale}}, true);
    CHECK(best > polygon_ground_state(skewed_scaled, 8, 0.05));
    CHECK_THROWS_AS(polygon_ground_state(circle, 2, 0.05), std::invalid_argument);
    CHECK_THROWS_AS(polygon_ground_state(circle, 8, 0.5, 3), SolverError);
}

TEST_CASE("bent polymers") {
    const PolymerParams p{2, 1.0, 0.0};
    const int n = 201;
    const SpectralResult bent = curved_polymer_bound_state(bent_array(p, n, pi / 2), 2, 1e-10);
    const double straight = point_spectrum(straight_array(p, n), 1, 1e-10).states[0].energy;
    REQUIRE(!bent.states.empty());
    CHECK(bent.warnings.empty());
    CHECK(bent.states[0].energy < straight);
    CHECK(bent.states[0].energy < bent.threshold);
    CHECK(bent.threshold == doctest::Approx(polymer_threshold(p)));
    CHECK_THROWS_AS(curved_polymer_bound_state(straight_array(p, 20)), std::invalid_argument);
    PointArray uneven = bent_array(p, 9, 1.0);
    uneven.points[0].x() -= 0.1;
    CHECK_THROWS_AS(curved_polymer_bound_state(uneven), std::invalid_argument);
    // sharper bends bind more strongly
    double previous = 0.0;
    for (double turn : {0.5, 1.0, 1.5, 2.0}) {
        const double e = point_spectrum(bent_array(p, 101, turn), 1, 1e-10).states[0].energy;
        CHECK(e < previous);
        previous = e;
    }
}
