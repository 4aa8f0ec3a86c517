#include "leaky/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <queue>
#include <stdexcept>

namespace leaky {
namespace {

GaussRule compute_rule(int order) {
    GaussRule rule;
    rule.nodes.resize(order);
    rule.weights.resize(order);
    const double pi = 3.14159265358979323846;
    for (int i = 0; i < (order + 1) / 2; ++i) {
        double t = std::cos(pi * (i + 0.75) / (order + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = t;
            for (int k = 2; k <= order; ++k) {
                const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (order == 1) {
                p1 = t;
                p0 = 1.0;
            }
            dp = order * (t * p1 - p0) / (t * t - 1.0);
            const double step = p1 / dp;
            t -= step;
            if (std::fabs(step) < 1e-16) break;
        }
        // recompute derivative at the converged node
        double p0 = 1.0;
        double p1 = t;
        for (int k = 2; k <= order; ++k) {
            const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = order * (t * p1 - p0) / (t * t - 1.0);
        const double w = 2.0 / ((1.0 - t * t) * dp * dp);
        rule.nodes[i] = -t;
        rule.nodes[order - 1 - i] = t;
        rule.weights[i] = w;
        rule.weights[order - 1 - i] = w;
    }
    if (order % 2 == 1) rule.nodes[order / 2] = 0.0;
    return rule;
}

// Kronrod 15-point extension of the 7-point Gauss rule.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a;
    double b;
    double value;
    double error;
    bool operator<(const Segment& other) const { return error < other.error; }
};

Segment kronrod(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double gauss = fc * kWg[3];
    double kron = fc * kWgk[7];
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kXgk[j];
        const double fsum = f(c - dx) + f(c + dx);
        kron += kWgk[j] * fsum;
        if (j % 2 == 1) gauss += kWg[j / 2] * fsum;
    }
    return {a, b, kron * h, std::fabs((kron - gauss) * h)};
}

}  // namespace

const GaussRule& gauss_legendre(int order) {
    if (order < 1 || order > 512) throw std::invalid_argument("gauss_legendre: order out of range");
    static std::mutex mutex;
    static std::map<int, GaussRule> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, compute_rule(order)).first;
    return it->second;
}

std::vector<double> legendre_values(int n, double t) {
    std::vector<double> p(std::max(n, 2));
    p[0] = 1.0;
    p[1] = t;
    for (int k = 1; k + 1 < n; ++k) p[k + 1] = ((2.0 * k + 1.0) * t * p[k] - k * p[k - 1]) / (k + 1.0);
    p.resize(n);
    return p;
}

std::vector<double> log_moments(double t0, int count) {
    std::vector<double> moments(count);
    const double endpoint_tol = 1e-14;
    if (std::fabs(std::fabs(t0) - 1.0) <= endpoint_tol) {
        // closed form at an endpoint: int ln|1 - t| P_k = -2/(k(k+1)) for k >= 1
        const double sign = t0 > 0.0 ? 1.0 : -1.0;
        moments[0] = 2.0 * std::log(2.0) - 2.0;
        for (int k = 1; k < count; ++k) {
            const double parity = (k % 2 == 0 || sign > 0.0) ? 1.0 : -1.0;
            moments[k] = -2.0 * parity / (double(k) * (k + 1.0));
        }
        return moments;
    }
    if (std::fabs(t0) <= 1.1) {
        // J_n = int P_n(t)/(t - t0) dt by forward recurrence; M_k = -(J_{k+1} - J_{k-1})/(2k+1)
        std::vector<double> J(count + 2);
        J[0] = std::log(std::fabs((1.0 - t0) / (1.0 + t0)));
        for (int n = 0; n + 1 < count + 2; ++n) {
            const double source = (n == 0) ? 2.0 : 0.0;
            const double previous = (n == 0) ? 0.0 : J[n - 1];
            J[n + 1] = ((2.0 * n + 1.0) * (source + t0 * J[n]) - n * previous) / (n + 1.0);
        }
        const double a = 1.0 - t0;
        const double b = 1.0 + t0;
        moments[0] = a * std::log(std::fabs(a)) + b * std::log(std::fabs(b)) - 2.0;
        for (int k = 1; k < count; ++k) moments[k] = -(J[k + 1] - J[k - 1]) / (2.0 * k + 1.0);
        // J_{-1} does not enter because moments[0] uses the closed form
        return moments;
    }
    const GaussRule& rule = gauss_legendre(64);
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        const std::vector<double> p = legendre_values(count, rule.nodes[q]);
        const double lw = rule.weights[q] * std::log(std::fabs(rule.nodes[q] - t0));
        for (int k = 0; k < count; ++k) moments[k] += lw * p[k];
    }
    return moments;
}

std::vector<double> log_product_weights(double t0, int order) {
    const GaussRule& rule = gauss_legendre(order);
    const std::vector<double> moments = log_moments(t0, order);
    std::vector<double> weights(order, 0.0);
    for (int m = 0; m < order; ++m) {
        const std::vector<double> p = legendre_values(order, rule.nodes[m]);
        double sum = 0.0;
        for (int k = 0; k < order; ++k) sum += moments[k] * (2.0 * k + 1.0) * 0.5 * p[k];
        weights[m] = rule.weights[m] * sum;
    }
    return weights;
}

std::vector<double> lagrange_basis(int order, double t) {
    const GaussRule& rule = gauss_legendre(order);
    std::vector<double> basis(order, 1.0);
    for (int m = 0; m < order; ++m) {
        for (int j = 0; j < order; ++j) {
            if (j != m) basis[m] *= (t - rule.nodes[j]) / (rule.nodes[m] - rule.nodes[j]);
        }
    }
    return basis;
}

IntegrationResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                     double abs_tol, double rel_tol,
                                     const std::vector<double>& breakpoints, int max_intervals) {
    if (!(b > a)) throw std::invalid_argument("integrate_adaptive: empty interval");
    std::vector<double> cuts{a};
    for (double p : breakpoints) {
        if (p > a && p < b) cuts.push_back(p);
    }
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    std::priority_queue<Segment> queue;
    double total = 0.0;
    double error = 0.0;
    int evaluations = 0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (cuts[i + 1] <= cuts[i]) continue;
        Segment s = kronrod(f, cuts[i], cuts[i + 1]);
        evaluations += 15;
        total += s.value;
        error += s.error;
        queue.push(s);
    }
    while (error > std::max(abs_tol, rel_tol * std::fabs(total)) && int(queue.size()) < max_intervals) {
        Segment worst = queue.top();
        queue.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            queue.push(worst);
            break;
        }
        const Segment left = kronrod(f, worst.a, mid);
        const Segment right = kronrod(f, mid, worst.b);
        evaluations += 30;
        total += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        queue.push(left);
        queue.push(right);
    }
    // re-sum to limit cancellation drift
    double sum = 0.0;
    double err = 0.0;
    while (!queue.empty()) {
        sum += queue.top().value;
        err += queue.top().error;
        queue.pop();
    }
    return {sum, err, evaluations};
}

}  // namespace leaky
