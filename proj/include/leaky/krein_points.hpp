#pragma once

#include <vector>

#include <Eigen/Core>

#include "leaky/geometry.hpp"
#include "leaky/spectral.hpp"

namespace leaky {

// Krein matrix of a finite point array at energy -kappa^2:
// diagonal alpha_j - xi_d(kappa), off-diagonal -G_kappa(y_j - y_j').
struct KreinSystem {
    PointArray array;
    double kappa = 0.0;
    Eigen::MatrixXd matrix;
};

KreinSystem build_krein(const PointArray& array, double kappa);

// Ascending eigenvalues of the Krein matrix; each branch increases with kappa.
Eigen::VectorXd krein_eigenvalues(const PointArray& array, double kappa);

// Bound states from the zeros of the Krein eigenvalue branches. Coefficients hold the unit null vector d.
SpectralResult point_spectrum(const PointArray& array, int j_max = 8, double tol = 1e-10);

// psi(x) = sum_j d_j G_kappa(x - y_j).
double point_eigenfunction(const PointArray& array, const BoundState& state, const Vec3& x);

// n points spread over the graph in proportion to edge length, each with point-alpha n / (alpha |Gamma|).
PointArray approximate_graph(const LeakyGraph& graph, double alpha, int n);

struct PolymerParams {
    int dimension = 2;
    double spacing = 1.0;
    double alpha = 0.0;  // point-alpha

    void validate() const;
};

// Bottom of the essential spectrum of the infinite straight array.
double polymer_threshold(const PolymerParams& params);

// (1/2 pi) lim_N { sum_{|n| <= N} (1/2) [(n + theta l / 2pi)^2 + (kappa l / 2pi)^2]^{-1/2} - ln N }.
double renormalized_sum_g(double kappa, double theta, double spacing);

// Straight array of n points along the x axis, centred at the origin.
PointArray straight_array(const PolymerParams& params, int n);

// Broken line of equally spaced points: one arm along -x, the other turned by `turn` radians from +x.
PointArray bent_array(const PolymerParams& params, int n, double turn);

// Ground energies of straight arrays of the given sizes, extrapolated to infinite length
// assuming E_N = E + a / N^2 + b / N^3.
double polymer_extrapolate(const PolymerParams& params, const std::vector<int>& counts);

// Ground state of N points placed at arc length jL/N along a closed loop.
double polygon_ground_state(const ArcCurve& loop, int n, double alpha, int dimension = 2);

// Bound states of an equally spaced, non-collinear array; threshold set to the straight polymer threshold.
SpectralResult curved_polymer_bound_state(const PointArray& array, int j_max = 4, double tol = 1e-10);

}  // namespace leaky
