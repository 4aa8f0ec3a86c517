#include "leaky/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace leaky {

void check_tolerance(double tol) {
    if (!(tol >= 1e-10 && tol <= 1e-4)) throw std::invalid_argument("tolerance must lie in [1e-10, 1e-4]");
}

void flag_multiplicities(std::vector<BoundState>& states, double tol) {
    std::size_t start = 0;
    while (start < states.size()) {
        std::size_t end = start + 1;
        while (end < states.size() &&
               std::fabs(states[end].kappa - states[end - 1].kappa) <= 10.0 * tol * states[end - 1].kappa) {
            ++end;
        }
        for (std::size_t i = start; i < end; ++i) states[i].multiplicity = int(end - start);
        start = end;
    }
}


std::vector<Crossing> solve_crossings(const CrossingSearch& search) {
    check_tolerance(search.tol);
    if (search.j_max < 1) throw std::invalid_argument("j_max must be at least 1");
    if (!(search.kappa_floor > 0.0)) throw std::invalid_argument("kappa floor must be positive");
    std::map<double, Eigen::VectorXd> cache;
    auto eval = [&](double kappa) -> const Eigen::VectorXd& {
        auto it = cache.find(kappa);
        if (it == cache.end()) it = cache.emplace(kappa, search.branches(kappa)).first;
        return it->second;
    };
    const Eigen::VectorXd& floor_values = eval(search.kappa_floor);
    int count = 0;
    while (count < floor_values.size() && count < search.j_max && floor_values[count] > search.level) ++count;
    std::vector<Crossing> out;
    if (count == 0) return out;

    double ceiling = 2.0 * search.kappa_floor;
    for (int i = 0; eval(ceiling)[0] > search.level; ++i) {
        if (i > 2100) throw SolverError("eigenvalue branch does not fall below the crossing level");
        ceiling *= 2.0;
    }

    auto branch = [&](double kappa, int j) { return eval(kappa)[j]; };
    for (int j = 0; j < count; ++j) {
        double lo = search.kappa_floor;
        double hi = ceiling;
        for (const auto& [kappa, values] : cache) {
            if (values[j] > search.level) lo = std::max(lo, kappa);
            else hi = std::min(hi, kappa);
        }
        while (hi - lo > search.tol * lo) {
            const double mid = (hi > 2.0 * lo) ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
            if (branch(mid, j) > search.level) lo = mid; else hi = mid;
        }
        const double f_lo = branch(lo, j) - search.level;
        const double f_hi = branch(hi, j) - search.level;
        double kappa = (f_lo - f_hi > 0.0) ? lo + (hi - lo) * f_lo / (f_lo - f_hi) : 0.5 * (lo + hi);
        kappa = std::clamp(kappa, lo, hi);
        const double f_mid = std::fabs(branch(kappa, j) - search.level);
        if (f_mid > std::min(std::fabs(f_lo), std::fabs(f_hi))) kappa = std::fabs(f_lo) < std::fabs(f_hi) ? lo : hi;
        out.push_back({kappa, lo, hi});
    }
    return out;
}

}  // namespace leaky
