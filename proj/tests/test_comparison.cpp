#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "leaky/comparison.hpp"

using namespace leaky;

namespace {

constexpr double pi = std::numbers::pi;

// Plane waves diagonalize the constant-curvature loop: ((2 pi n + phi) / L)^2 - (pi / L)^2.
std::vector<double> circle_oracle(double length, double phi, int count) {
    std::vector<double> v;
    for (int n = -count; n <= count; ++n) v.push_back(std::pow((2.0 * pi * n + phi) / length, 2) - std::pow(pi / length, 2));
    std::sort(v.begin(), v.end());
    v.resize(std::size_t(count));
    return v;
}

}  // namespace

TEST_CASE("constant curvature loop") {
    const double length = 3.0;
    const ArcCurve circle = ArcCurve::circle({0, 0}, length / (2.0 * pi));
    const std::vector<double> mu = comparison_eigs(curve_problem(circle), 5);
    const std::vector<double> exact = circle_oracle(length, 0.0, 5);
    for (int j = 0; j < 5; ++j) CHECK(mu[j] == doctest::Approx(exact[j]).epsilon(1e-8));
    CHECK(mu[0] == doctest::Approx(-pi * pi / (length * length)).epsilon(1e-10));
    for (double phi : {0.4, 1.7, 3.0, -2.2}) {
        const std::vector<double> twisted = comparison_eigs(curve_problem(circle, {BoundaryKind::flux, phi}), 4);
        const std::vector<double> expected = circle_oracle(length, phi, 4);
        CHECK(std::fabs(twisted[0] - expected[0]) < 1e-8);
        for (int j = 1; j < 4; ++j) CHECK(twisted[j] == doctest::Approx(expected[j]).epsilon(1e-8));
        const std::vector<double> shifted = comparison_eigs(curve_problem(circle, {BoundaryKind::flux, phi + 2.0 * pi}), 4);
        for (int j = 0; j < 4; ++j) CHECK(std::fabs(shifted[j] - twisted[j]) < 1e-10);
    }
    CHECK(strong_coupling_predict(circle, 10.0, 1) == doctest::Approx(-25.0 - pi * pi / (length * length)).epsilon(1e-10));
}

TEST_CASE("straight interval") {
    const double length = 2.0;
    ComparisonProblem p{[](double) { return 0.0; }, length, {BoundaryKind::dirichlet, 0.0}, 128};
    const std::vector<double> d = comparison_eigs(p, 6);
    for (int j = 0; j < 6; ++j) CHECK(d[j] == doctest::Approx(std::pow((j + 1) * pi / length, 2)).epsilon(1e-6));
    p.bc.kind = BoundaryKind::neumann;
    const std::vector<double> n = comparison_eigs(p, 6);
    CHECK(std::fabs(n[0]) < 1e-10);
    for (int j = 1; j < 6; ++j) CHECK(n[j] == doctest::Approx(std::pow(j * pi / length, 2)).epsilon(1e-6));
}

TEST_CASE("second-order convergence and comparison with the free operator") {
    auto k = [](double s) { return 1.0 + 0.8 * std::cos(2.0 * pi * s / 2.5) + 0.3 * std::sin(4.0 * pi * s / 2.5); };
    for (BoundaryKind kind : {BoundaryKind::periodic, BoundaryKind::dirichlet, BoundaryKind::neumann}) {
        ComparisonProblem p{k, 2.5, {kind, 0.0}, 64};
        std::vector<double> e1 = discretized_eigs(p, 3);
        p.grid = 128;
        std::vector<double> e2 = discretized_eigs(p, 3);
        p.grid = 256;
        std::vector<double> e3 = discretized_eigs(p, 3);
        for (int j = 0; j < 3; ++j) {
            const double ratio = (e1[j] - e2[j]) / (e2[j] - e3[j]);
            CHECK(ratio == doctest::Approx(4.0).epsilon(0.05));
        }
        ComparisonProblem free = p;
        free.curvature = [](double) { return 0.0; };
        const std::vector<double> with = comparison_eigs(p, 5);
        const std::vector<double> without = comparison_eigs(free, 5);
        for (int j = 0; j < 5; ++j) CHECK(with[j] <= without[j]);
    }
}

TEST_CASE("comparison input checks") {
    ComparisonProblem p{[](double s) { return s; }, 1.0, {BoundaryKind::periodic, 0.0}, 128};
    CHECK_THROWS_AS(comparison_eigs(p, 2), std::invalid_argument);
    p.bc.kind = BoundaryKind::dirichlet;
    CHECK_NOTHROW(comparison_eigs(p, 2));
    CHECK_THROWS_AS(comparison_eigs(p, 33), std::invalid_argument);
    p.grid = 32;
    CHECK_THROWS_AS(comparison_eigs(p, 2), std::invalid_argument);
    const ArcCurve arc = ArcCurve::circle({0, 0}, 1.0, 0.0, 2.0);
    CHECK_THROWS_AS(strong_coupling_predict(arc, 10.0, 1), std::invalid_argument);
    CHECK_NOTHROW(strong_coupling_predict(arc, 10.0, 1, BoundaryKind::dirichlet));
    const ArcCurve square = ArcCurve::polyline({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, true);
    CHECK_THROWS_AS(strong_coupling_predict(square, 10.0, 1), std::invalid_argument);
}

TEST_CASE("Floquet bands") {
    std::vector<double> thetas;
    for (int i = 0; i <= 16; ++i) thetas.push_back(-pi + 2.0 * pi * i / 16.0);
    const double period = 1.5;
    const BandStructure free = band_structure([](double) { return 0.0; }, period, thetas, 4);
    CHECK(free.gaps.empty());
    for (std::size_t t = 0; t < thetas.size(); ++t) {
        CHECK(free.values[t][0] == doctest::Approx(std::pow(thetas[t] / period, 2)).epsilon(1e-7));
    }
    auto k = [period](double s) { return 2.0 + std::cos(2.0 * pi * s / period); };
    const BandStructure bands = band_structure(k, period, thetas, 4);
    CHECK(!bands.gaps.empty());
    for (const Gap& g : bands.gaps) CHECK(g.upper > g.lower);
    // mu(theta) = mu(-theta), up to the dense eigensolver's eps * |A| rounding
    for (std::size_t t = 1; t < thetas.size() - 1; ++t) {
        for (int j = 0; j < 4; ++j) CHECK(std::fabs(bands.values[t][j] - bands.values[thetas.size() - 1 - t][j]) < 1e-9);
    }
}

TEST_CASE("flux dispersion") {
    const ArcCurve circle = ArcCurve::circle({0, 0}, 0.5);
    const double area = pi * 0.25;
    std::vector<double> fields;
    for (int i = 0; i <= 8; ++i) fields.push_back(i * pi / (8.0 * area));
    const std::vector<double> lambda = flux_dispersion(circle, 20.0, fields, 1);
    CHECK(lambda.front() == doctest::Approx(strong_coupling_predict(circle, 20.0, 1)).epsilon(1e-6));
    for (std::size_t i = 1; i < lambda.size(); ++i) CHECK(lambda[i] > lambda[i - 1]);
    const std::vector<FourierHarmonic> self_crossing{{1, 1.0, 0.0, 0.0, 1.0}, {2, 0.0, 0.0, 0.0, 1.4}};
    CHECK_THROWS(flux_dispersion(make_fourier_loop(self_crossing, 5.0), 10.0, fields, 1));
}
