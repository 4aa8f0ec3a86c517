#pragma once

#include <vector>

#include "leaky/geometry.hpp"
#include "leaky/spectral.hpp"

namespace leaky {

// A delta line of strength alpha along x2 = 0 plus two-dimensional point interactions (point-alpha beta_i).
struct LineDefectConfig {
    double alpha = 1.0;
    std::vector<Vec2> points;
    std::vector<double> betas;

    void validate() const;
};

// Line part of the resolvent kernel at energy -kappa^2, kappa > alpha / 2:
// (alpha / 2pi) int_0^inf cos(p (x1 - y1)) exp(-tau (|x2| + |y2|)) / (tau (2 tau - alpha)) dp, tau = sqrt(p^2 + kappa^2).
double sigma_correction(double alpha, double kappa, const Vec2& x, const Vec2& y);

// Full kernel: green2(kappa, |x - y|) + sigma_correction.
double sigma_kernel(double alpha, double kappa, const Vec2& x, const Vec2& y);

// Condition matrix: diagonal beta_i - xi_2(kappa) - correction(y_i, y_i), off-diagonal -kernel(y_i, y_j).
Eigen::MatrixXd line_defect_matrix(const LineDefectConfig& config, double kappa);

// Bound states below -alpha^2 / 4 from the zeros of the condition matrix branches.
SpectralResult line_defect_spectrum(const LineDefectConfig& config, double tol = 1e-10);

}  // namespace leaky
