#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "leaky/geometry.hpp"

using namespace leaky;

namespace {

constexpr double pi = std::numbers::pi;

// Fourth-order central difference of the position: unit speed means |d gamma/ds| = 1.
double speed_at(const ArcCurve& c, double s) {
    const double h = 2e-4 * c.length();
    const Vec2 d = (-c.point(s + 2 * h) + 8.0 * c.point(s + h) - 8.0 * c.point(s - h) + c.point(s - 2 * h)) / (12.0 * h);
    return d.norm();
}

ArcCurve ellipse_loop(double length) {
    const std::vector<FourierHarmonic> h{{1, 1.0, 0.0, 0.0, 0.6}};
    return make_fourier_loop(h, length);
}

}  // namespace

TEST_CASE("single harmonic gives a circle") {
    const std::vector<FourierHarmonic> h{{1, 2.0, 0.0, 0.0, 2.0}};
    const ArcCurve c = make_fourier_loop(h, 3.0);
    CHECK(c.kind() == CurveKind::fourier_loop);
    CHECK(c.length() == doctest::Approx(3.0).epsilon(1e-14));
    for (double s : {0.0, 0.4, 1.7, 2.9}) CHECK(c.curvature(s) == doctest::Approx(2.0 * pi / 3.0).epsilon(1e-10));
    CHECK((c.point(0.0) - c.point(3.0)).norm() < 1e-10 * 3.0);
}

TEST_CASE("fourier loops are reparametrized to unit speed") {
    const ArcCurve c = ellipse_loop(5.0);
    for (int i = 0; i < 50; ++i) {
        CHECK(std::fabs(speed_at(c, 5.0 * i / 50.0) - 1.0) < 1e-8);
    }
    // total length from a fine chord sum
    double sum = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) sum += (c.point(5.0 * (i + 1) / n) - c.point(5.0 * i / n)).norm();
    CHECK(sum == doctest::Approx(5.0).epsilon(1e-7));
}

TEST_CASE("unit speed bound on chords") {
    const ArcCurve c = ellipse_loop(2.0);
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(0.0, 2.0);
    for (int i = 0; i < 200; ++i) {
        const double a = u(rng);
        const double b = u(rng);
        CHECK((c.point(a) - c.point(b)).norm() <= std::fabs(a - b) + 1e-12);
    }
}

TEST_CASE("fourier loop rejects bad input") {
    const std::vector<FourierHarmonic> crossing{{1, 1.0, 0.0, 0.0, 1.0}, {2, 0.0, 0.0, 0.0, 2.0}};
    CHECK_THROWS_AS(make_fourier_loop(crossing, 1.0), std::invalid_argument);
    const std::vector<FourierHarmonic> zero{{1, 0.0, 0.0, 0.0, 0.0}};
    CHECK_THROWS_AS(make_fourier_loop(zero, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(make_fourier_loop(std::vector<FourierHarmonic>{}, 1.0), std::invalid_argument);
}

TEST_CASE("segments circles and polylines") {
    const ArcCurve seg = ArcCurve::segment({0, 0}, {3, 4});
    CHECK(seg.length() == doctest::Approx(5.0));
    CHECK(seg.point(2.5).x() == doctest::Approx(1.5));
    CHECK(seg.curvature(1.0) == 0.0);
    const ArcCurve arc = ArcCurve::circle({0, 0}, 2.0, 0.0, pi / 2);
    CHECK_FALSE(arc.closed());
    CHECK(arc.length() == doctest::Approx(pi));
    CHECK(arc.point(pi).x() == doctest::Approx(0.0).scale(1.0));
    const ArcCurve square = ArcCurve::polyline({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, true);
    CHECK(square.closed());
    CHECK(square.length() == doctest::Approx(4.0));
    CHECK(square.corners().size() == 3);
    CHECK(square.point(2.5).x() == doctest::Approx(0.5));
    CHECK_THROWS_AS(ArcCurve::polyline({{0, 0}, {1, 1}, {1, 0}, {0, 1}}, true), std::invalid_argument);
    const ArcCurve piece = square.subcurve(3.5, 4.5);
    CHECK(piece.length() == doctest::Approx(1.0));
    CHECK(piece.corners().size() == 1);
    CHECK(piece.point(1.0).x() == doctest::Approx(0.5));
}

TEST_CASE("graph splits polylines and checks angles") {
    LeakyGraph g(2.0);
    g.add_edge(ArcCurve::polyline({{0, 0}, {1, 0}, {1, 1}}));
    CHECK(g.edges().size() == 2);
    CHECK(g.total_length() == doctest::Approx(2.0));
    CHECK_NOTHROW(g.validate());
    CHECK(g.threshold() == 0.0);
    LeakyGraph folded(1.0);
    folded.add_edge(ArcCurve::segment({0, 0}, {1, 0}));
    folded.add_edge(ArcCurve::segment({0, 0}, {2, 0}));
    CHECK_THROWS_AS(folded.validate(), std::invalid_argument);
    LeakyGraph weak(0.0);
    weak.add_edge(ArcCurve::segment({0, 0}, {1, 0}));
    CHECK_THROWS_AS(weak.validate(), std::invalid_argument);
}

TEST_CASE("star graphs and distances") {
    const StarConfig cross{{pi / 2, pi / 2, pi / 2}, 0.0};
    const LeakyGraph g = make_star_graph(cross, 4.0);
    CHECK(g.edges().size() == 4);
    CHECK(g.edges()[0].curve.length() == doctest::Approx(6.0));
    CHECK(g.threshold() == doctest::Approx(-4.0));
    CHECK(star_distance(cross, 2, 2, 1.0, 3.5) == doctest::Approx(2.5));
    CHECK(star_distance(cross, 0, 2, 1.0, 1.0) == doctest::Approx(2.0));
    CHECK(star_distance(cross, 0, 1, 3.0, 4.0) == doctest::Approx(5.0));
    CHECK_THROWS_AS(star_distance(cross, 0, 4, 1.0, 1.0), std::out_of_range);
    const StarConfig bad{{pi, pi}, 1.0};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    const StarConfig star{{0.7, 1.9, 1.1}, 0.0};
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(0.0, 3.0);
    std::uniform_int_distribution<int> ray(0, 3);
    for (int t = 0; t < 200; ++t) {
        const int i = ray(rng), j = ray(rng), k = ray(rng);
        const double a = u(rng), b = u(rng), c = u(rng);
        CHECK(star_distance(star, i, j, a, b) == doctest::Approx(star_distance(star, j, i, b, a)));
        const Vec2 pa = a * Vec2(std::cos(star.ray_angle(i)), std::sin(star.ray_angle(i)));
        const Vec2 pb = b * Vec2(std::cos(star.ray_angle(j)), std::sin(star.ray_angle(j)));
        CHECK(star_distance(star, i, j, a, b) == doctest::Approx((pa - pb).norm()).epsilon(1e-12).scale(1.0));
        CHECK(star_distance(star, i, k, a, c) <= star_distance(star, i, j, a, b) + star_distance(star, j, k, b, c) + 1e-12);
    }
}

TEST_CASE("chord integral of the circle and its bound") {
    const double L = 2.0 * pi;
    const ArcCurve circle = ArcCurve::circle({0, 0}, 1.0);
    for (double p : {1.0, 2.0, 0.5}) {
        for (double u : {0.3, 1.0, pi}) {
            CHECK(chord_mean(circle, u, p) == doctest::Approx(circle_chord_bound(L, u, p)).epsilon(1e-10));
        }
    }
    CHECK(chord_mean(circle, pi, 2.0) == doctest::Approx(L * L * L / (pi * pi)).epsilon(1e-10));
    double previous = 0.0;
    for (double u = 0.1; u <= pi; u += 0.1) {
        const double value = chord_mean(circle, u, 1.0);
        CHECK(value > previous);
        previous = value;
    }
    const ArcCurve ellipse = ellipse_loop(L);
    for (double p : {1.0, 2.0}) {
        for (double u : {0.5, 1.5, 3.0}) CHECK(chord_mean(ellipse, u, p) < circle_chord_bound(L, u, p));
    }
    CHECK_THROWS_AS(chord_mean(ArcCurve::segment({0, 0}, {1, 0}), 0.5, 1.0), std::invalid_argument);
}

TEST_CASE("polygon chord sums") {
    const int n = 8;
    const double L = 4.0;
    const double radius = (L / n) / (2.0 * std::sin(pi / n));
    std::vector<Vec2> regular;
    for (int j = 0; j < n; ++j) regular.push_back(radius * Vec2(std::cos(2 * pi * j / n), std::sin(2 * pi * j / n)));
    for (double p : {1.0, 2.0}) {
        for (int k = 1; k < n; ++k) {
            CHECK(polygon_chord_sum(regular, L, k, p) ==
                  doctest::Approx(regular_polygon_chord_bound(n, L, k, p)).epsilon(1e-10));
        }
    }
    CHECK(polygon_chord_sum(regular, L, 0, 1.0) == 0.0);
    // move one vertex inward along the bisector, keeping both adjacent sides at most L/n
    std::vector<Vec2> perturbed = regular;
    perturbed[3] *= 0.97;
    CHECK(polygon_chord_sum(perturbed, L, 2, 1.0) < regular_polygon_chord_bound(n, L, 2, 1.0));
    std::vector<Vec2> stretched = regular;
    stretched[3] *= 1.2;
    CHECK_THROWS_AS(polygon_chord_sum(stretched, L, 1, 1.0), std::invalid_argument);
}

TEST_CASE("point arrays and areas") {
    PointArray a{2, {Vec3(0, 0, 0), Vec3(1, 0, 0)}, {0.0, 0.0}};
    CHECK_NOTHROW(a.validate());
    a.points[1] = Vec3(0, 0, 5);  // z is ignored in two dimensions
    CHECK_THROWS_AS(a.validate(), std::invalid_argument);
    PointArray b{3, {Vec3(0, 0, 0)}, {}};
    CHECK_THROWS_AS(b.validate(), std::invalid_argument);
    CHECK(enclosed_area(ArcCurve::circle({0, 0}, 1.0)) == doctest::Approx(pi).epsilon(1e-6));
    CHECK(enclosed_area(ArcCurve::polyline({{0, 0}, {2, 0}, {2, 1}, {0, 1}}, true)) == doctest::Approx(2.0));
}
