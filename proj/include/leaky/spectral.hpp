#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace leaky {

// Raised when a solver cannot deliver a trustworthy answer for valid input.
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SupportNode {
    Eigen::Vector3d position = Eigen::Vector3d::Zero();
    double weight = 1.0;
    int edge = -1;
    double s = 0.0;
};

struct BoundState {
    int index = 0;
    double kappa = 0.0;
    double energy = 0.0;
    Eigen::VectorXd coefficients;
    double residual = 0.0;
    int multiplicity = 1;
};

struct SpectralResult {
    std::string method;
    double coupling = 0.0;
    double threshold = 0.0;
    std::vector<BoundState> states;
    std::vector<SupportNode> support;
    std::vector<std::string> warnings;
};

// Bisection interval width relative to kappa, accepted by every solver.
void check_tolerance(double tol);

// Marks states whose kappas agree to within the tolerance as degenerate.
void flag_multiplicities(std::vector<BoundState>& states, double tol);

// Branches f_1 >= f_2 >= ... of a parameter-dependent spectrum, each strictly decreasing in kappa.
// Finds, for every branch above `level` at kappa_floor (at most j_max), the kappa where it crosses `level`.
struct CrossingSearch {
    std::function<Eigen::VectorXd(double)> branches;
    double level = 1.0;
    double kappa_floor = 0.0;
    int j_max = 1;
    double tol = 1e-8;
};

struct Crossing {
    double kappa = 0.0;
    double lower = 0.0;  // final bracket
    double upper = 0.0;
};

std::vector<Crossing> solve_crossings(const CrossingSearch& search);

// Illinois regula falsi on a bracket where f(lo) < 0 < f(hi).
template <class F>
double refine_root(F&& f, double lo, double hi) {
    double f_lo = f(lo);
    double f_hi = f(hi);
    if (!(f_lo < 0.0 && f_hi > 0.0)) return 0.5 * (lo + hi);
    int side = 0;
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 100 && hi - lo > 4e-16 * hi; ++it) {
        x = (lo * f_hi - hi * f_lo) / (f_hi - f_lo);
        if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
        const double fx = f(x);
        if (fx == 0.0) return x;
        if (fx < 0.0) {
            lo = x;
            f_lo = fx;
            if (side == -1) f_hi *= 0.5;
            side = -1;
        } else {
            hi = x;
            f_hi = fx;
            if (side == 1) f_lo *= 0.5;
            side = 1;
        }
    }
    return x;
}

}  // namespace leaky
