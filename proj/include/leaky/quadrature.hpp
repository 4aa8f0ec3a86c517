#pragma once

#include <array>
#include <functional>
#include <vector>

namespace leaky {

struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Gauss-Legendre rule on [-1, 1]; cached per order.
const GaussRule& gauss_legendre(int order);

// Legendre polynomials P_0..P_{n-1} at t.
std::vector<double> legendre_values(int n, double t);

// Moments int_{-1}^{1} ln|t - t0| P_k(t) dt for k = 0..count-1.
std::vector<double> log_moments(double t0, int count);

// Weights lambda_m with int_{-1}^{1} ln|t - t0| f(t) dt ~ sum_m lambda_m f(t_m)
// for the Gauss-Legendre nodes t_m of the given order.
std::vector<double> log_product_weights(double t0, int order);

// Lagrange basis of the Gauss-Legendre nodes of the given order, evaluated at t.
std::vector<double> lagrange_basis(int order, double t);

struct IntegrationResult {
    double value = 0.0;
    double error = 0.0;
    int evaluations = 0;
};

// Adaptive Gauss-Kronrod (7/15) on [a, b] with optional interior breakpoints.
IntegrationResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                     double abs_tol, double rel_tol,
                                     const std::vector<double>& breakpoints = {},
                                     int max_intervals = 4000);

}  // namespace leaky
