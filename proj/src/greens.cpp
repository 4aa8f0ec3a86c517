#include "leaky/greens.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace leaky {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kSeriesCut = 2.0;

void require_positive(double x, const char* what) {
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw std::domain_error(std::string(what) + ": argument must be positive and finite");
    }
}

// Power series around zero: q = x^2/4, terms q^k/(k!)^2.
struct SmallSeries {
    double i0 = 0.0;
    double i1 = 0.0;
    double harmonic_sum = 0.0;  // sum_k q^k/(k!)^2 H_k
    double k1_sum = 0.0;        // sum_k q^k/(k!(k+1)!) (psi(k+1) + psi(k+2))
};

SmallSeries small_series(double x) {
    const double q = 0.25 * x * x;
    SmallSeries out;
    double term = 1.0;       // q^k/(k!)^2
    double term1 = 1.0;      // q^k/(k!(k+1)!)
    double harmonic = 0.0;   // H_k
    for (int k = 0; k < 500; ++k) {
        if (k > 0) {
            term *= q / (double(k) * double(k));
            term1 *= q / (double(k) * double(k + 1));
            harmonic += 1.0 / k;
        }
        out.i0 += term;
        out.i1 += term1;
        out.harmonic_sum += term * harmonic;
        const double psi_sum = 2.0 * (harmonic - kEulerGamma) + 1.0 / (k + 1);
        out.k1_sum += term1 * psi_sum;
        if (k > 2 && term < kEps * out.i0 * 1e-2) break;
    }
    out.i1 *= 0.5 * x;
    return out;
}

// Continued fraction for K0 and K1 at large argument (Steed/Temme scheme).
void large_k(double x, double& k0v, double& k1v) {
    double b = 2.0 * (1.0 + x);
    double d = 1.0 / b;
    double h = d;
    double delh = d;
    double q1 = 0.0;
    double q2 = 1.0;
    const double a1 = 0.25;
    double q = a1;
    double c = a1;
    double a = -a1;
    double s = 1.0 + q * delh;
    for (int i = 1; i < 100000; ++i) {
        a -= 2.0 * i;
        c = -a * c / (i + 1.0);
        const double qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        const double dels = q * delh;
        s += dels;
        if (std::fabs(dels / s) < kEps) break;
    }
    h *= a1;
    k0v = std::sqrt(kPi / (2.0 * x)) * std::exp(-x) / s;
    k1v = k0v * (x + 0.5 - h) / x;
}

}  // namespace

double i0(double x) {
    if (x < 0.0 || !std::isfinite(x)) throw std::domain_error("i0: argument must be non-negative");
    return small_series(x).i0;
}

double k0(double x) {
    require_positive(x, "k0");
    if (x <= kSeriesCut) {
        const SmallSeries s = small_series(x);
        return -(std::log(0.5 * x) + kEulerGamma) * s.i0 + s.harmonic_sum;
    }
    double k0v = 0.0;
    double k1v = 0.0;
    large_k(x, k0v, k1v);
    return k0v;
}

double k1(double x) {
    require_positive(x, "k1");
    if (x <= kSeriesCut) {
        const SmallSeries s = small_series(x);
        return 1.0 / x + std::log(0.5 * x) * s.i1 - 0.25 * x * s.k1_sum;
    }
    double k0v = 0.0;
    double k1v = 0.0;
    large_k(x, k0v, k1v);
    return k1v;
}

K0Split k0_split(double x) {
    if (x < 0.0 || !std::isfinite(x)) throw std::domain_error("k0_split: argument must be non-negative");
    if (x <= kSeriesCut) {
        const SmallSeries s = small_series(x);
        return {s.i0, (std::log(2.0) - kEulerGamma) * s.i0 + s.harmonic_sum};
    }
    const double iv = i0(x);
    return {iv, k0(x) + std::log(x) * iv};
}

double green2(double kappa, double r) {
    require_positive(kappa, "green2 kappa");
    require_positive(r, "green2 distance");
    return k0(kappa * r) / (2.0 * kPi);
}

double green3(double kappa, double r) {
    require_positive(kappa, "green3 kappa");
    require_positive(r, "green3 distance");
    return std::exp(-kappa * r) / (4.0 * kPi * r);
}

double xi(int dimension, double kappa) {
    require_positive(kappa, "xi kappa");
    if (dimension == 2) return -(std::log(0.5 * kappa) + kEulerGamma) / (2.0 * kPi);
    if (dimension == 3) return -kappa / (4.0 * kPi);
    throw std::invalid_argument("xi: dimension must be 2 or 3");
}

double xi_inverse(int dimension, double value) {
    if (dimension == 2) return 2.0 * std::exp(-2.0 * kPi * value - kEulerGamma);
    if (dimension == 3) {
        if (!(value < 0.0)) throw std::domain_error("xi_inverse: no positive kappa in three dimensions");
        return -4.0 * kPi * value;
    }
    throw std::invalid_argument("xi_inverse: dimension must be 2 or 3");
}

double zeta_threshold(double alpha) {
    if (!std::isfinite(alpha)) throw std::domain_error("zeta_threshold: alpha must be finite");
    const double kappa = xi_inverse(2, alpha);
    return -kappa * kappa;
}

}  // namespace leaky
