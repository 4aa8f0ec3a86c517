#include <doctest.h>

#include <cmath>

#include <boost/math/special_functions/bessel.hpp>

#include "leaky/greens.hpp"
#include "oracles.hpp"

using namespace leaky;

namespace {

// I0(x) = (1/pi) int_0^pi exp(x cos t) dt.
double i0_integral(double x) {
    const int n = 400;
    double sum = 0.5 * (std::exp(x) + std::exp(-x));
    for (int i = 1; i < n; ++i) sum += std::exp(x * std::cos(kPi * i / n));
    return sum / n;
}

}  // namespace

TEST_CASE("k0 matches tabulated values") {
    CHECK(k0(1.0) == doctest::Approx(0.42102443824070833).epsilon(1e-14));
    CHECK(k0(0.1) == doctest::Approx(2.4270690247020166).epsilon(1e-14));
    CHECK(k1(1.0) == doctest::Approx(0.60190723019723457).epsilon(1e-14));
    CHECK(i0(1.0) == doctest::Approx(1.2660658777520082).epsilon(1e-14));
}

TEST_CASE("bessel functions agree with integral representations") {
    for (double x : {1e-6, 1e-3, 0.05, 0.5, 1.0, 1.9, 2.0, 2.1, 3.0, 7.5, 20.0, 60.0, 300.0}) {
        CAPTURE(x);
        CHECK(k0(x) == doctest::Approx(oracle::k_integral(0, x)).epsilon(1e-12));
        CHECK(k1(x) == doctest::Approx(oracle::k_integral(1, x)).epsilon(1e-12));
        CHECK(k0(x) == doctest::Approx(boost::math::cyl_bessel_k(0, x)).epsilon(1e-13));
        CHECK(k1(x) == doctest::Approx(boost::math::cyl_bessel_k(1, x)).epsilon(1e-13));
        if (x < 300.0) {
            CHECK(i0(x) == doctest::Approx(i0_integral(x)).epsilon(1e-12));
        }
    }
}

TEST_CASE("k0 split reproduces k0") {
    for (double x : {1e-8, 0.3, 1.5, 2.0, 2.5, 8.0}) {
        CAPTURE(x);
        const K0Split s = k0_split(x);
        CHECK(-std::log(x) * s.i0 + s.regular == doctest::Approx(k0(x)).epsilon(1e-13));
    }
    CHECK(k0_split(0.0).regular == doctest::Approx(std::log(2.0) - kEulerGamma).epsilon(1e-15));
}

TEST_CASE("k0 small-argument asymptotics") {
    const double x = 1e-10;
    CHECK(k0(x) == doctest::Approx(-std::log(x / 2.0) - kEulerGamma).epsilon(1e-14));
}

TEST_CASE("k0 is positive and strictly decreasing") {
    double previous = k0(1e-4);
    for (double x = 2e-4; x < 50.0; x *= 1.1) {
        const double value = k0(x);
        CHECK(value > 0.0);
        CHECK(value < previous);
        previous = value;
    }
}

TEST_CASE("green kernels") {
    CHECK(green2(2.0, 0.5) == doctest::Approx(k0(1.0) / (2.0 * kPi)).epsilon(1e-15));
    CHECK(green3(1.0, 2.0) == doctest::Approx(std::exp(-2.0) / (8.0 * kPi)).epsilon(1e-15));
    CHECK_THROWS_AS(green2(1.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(green2(-1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(k0(0.0), std::domain_error);
}

TEST_CASE("xi is the regular part of the resolvent diagonal") {
    // G(r) - (-(1/2pi) ln r) -> xi as r -> 0 in two dimensions
    const double kappa = 1.7;
    const double r = 1e-7;
    CHECK(green2(kappa, r) + std::log(r) / (2.0 * kPi) == doctest::Approx(xi(2, kappa)).epsilon(1e-9));
    // three dimensions: G(r) - 1/(4 pi r) -> -kappa/(4 pi)
    CHECK(green3(kappa, r) - 1.0 / (4.0 * kPi * r) == doctest::Approx(xi(3, kappa)).epsilon(1e-6));
    CHECK_THROWS_AS(xi(4, 1.0), std::invalid_argument);
}

TEST_CASE("zeta threshold is the single point eigenvalue") {
    for (double alpha : {-1.0, 0.0, 0.3}) {
        const double zeta = zeta_threshold(alpha);
        CHECK(zeta < 0.0);
        CHECK(xi(2, std::sqrt(-zeta)) == doctest::Approx(alpha).epsilon(1e-13));
        CHECK(zeta == doctest::Approx(-4.0 * std::exp(2.0 * (-2.0 * kPi * alpha - kEulerGamma))).epsilon(1e-14));
    }
    CHECK(zeta_threshold(0.0) == doctest::Approx(-4.0 * std::exp(-2.0 * kEulerGamma)).epsilon(1e-15));
}
