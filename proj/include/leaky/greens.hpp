#pragma once

namespace leaky {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kEulerGamma = 0.57721566490153286061;

// Modified Bessel functions of order zero and one, x > 0 (i0 accepts x >= 0).
double k0(double x);
double k1(double x);
double i0(double x);

// K0(x) = -ln(x) I0(x) + regular, with regular(x) analytic in x^2.
struct K0Split {
    double i0;
    double regular;
};
K0Split k0_split(double x);

// Free resolvent kernels of -Laplace + kappa^2.
double green2(double kappa, double r);
double green3(double kappa, double r);

// Regularized diagonal of the free resolvent at energy -kappa^2 (d = 2 or 3).
double xi(int dimension, double kappa);

// Inverse of xi: the kappa at which xi(dimension, kappa) == value.
double xi_inverse(int dimension, double value);

// Energy of the single two-dimensional point interaction with parameter alpha.
double zeta_threshold(double alpha);

}  // namespace leaky
