#pragma once

#include <functional>
#include <vector>

#include "leaky/geometry.hpp"

namespace leaky {

enum class BoundaryKind { periodic, dirichlet, neumann, floquet, flux };

struct Boundary {
    BoundaryKind kind = BoundaryKind::periodic;
    double phase = 0.0;  // theta for floquet, Phi = B |Omega| for flux

    bool twisted() const { return kind == BoundaryKind::periodic || kind == BoundaryKind::floquet || kind == BoundaryKind::flux; }
};

// S = -d^2/ds^2 - k(s)^2 / 4 on (0, L).
struct ComparisonProblem {
    std::function<double(double)> curvature;
    double length = 1.0;
    Boundary bc;
    int grid = 256;

    void validate() const;
};

// Lowest j_max eigenvalues of the finite-difference matrix on one grid.
std::vector<double> discretized_eigs(const ComparisonProblem& problem, int j_max);

// Lowest j_max eigenvalues, Richardson-extrapolated from grids M and 2M.
std::vector<double> comparison_eigs(const ComparisonProblem& problem, int j_max);

// Comparison problem built from the curvature of a smooth curve.
ComparisonProblem curve_problem(const ArcCurve& curve, Boundary bc = {}, int grid = 256);

// -alpha^2/4 + mu_j, j counted from 1.
double strong_coupling_predict(const ArcCurve& curve, double alpha, int j, BoundaryKind bc = BoundaryKind::periodic);

struct Band {
    double bottom = 0.0;
    double top = 0.0;
};

struct Gap {
    int below = 0;  // band index (from 1) under the gap
    double lower = 0.0;
    double upper = 0.0;
};

struct BandStructure {
    std::vector<double> thetas;
    std::vector<std::vector<double>> values;  // values[t][j]
    std::vector<Band> bands;
    std::vector<Gap> gaps;
};

// Floquet spectra mu_j(theta) of one period of the curvature profile.
BandStructure band_structure(const std::function<double(double)>& curvature, double period, const std::vector<double>& thetas,
                             int j_max, int grid = 256);

// Predicted lambda_j(alpha, B) for each field strength B on a closed loop.
std::vector<double> flux_dispersion(const ArcCurve& curve, double alpha, const std::vector<double>& fields, int j,
                                    int grid = 256);

}  // namespace leaky
