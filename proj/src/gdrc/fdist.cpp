#include "gdrc/fdist.hpp"

#include <cmath>

#include "gdrc/error.hpp"

namespace gdrc {

namespace {

double log_gamma(double x) { return std::lgamma(x); }

// Continued fraction for I_x(a,b), valid for x < (a+1)/(a+b+2).
double beta_cf(double a, double b, double x) {
    constexpr int kMaxIter = 300;
    constexpr double kEps = 1e-15;
    constexpr double kTiny = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) break;
    }
    return h;
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double lbt = log_gamma(a + b) - log_gamma(a) - log_gamma(b) + a * std::log(x) +
                       b * std::log(1.0 - x);
    const double bt = std::exp(lbt);
    if (x < (a + 1.0) / (a + b + 2.0)) return bt * beta_cf(a, b, x) / a;
    return 1.0 - bt * beta_cf(b, a, 1.0 - x) / b;
}

double f_cdf(double x, double d1, double d2) {
    if (x <= 0.0) return 0.0;
    return incomplete_beta(d1 / 2.0, d2 / 2.0, d1 * x / (d1 * x + d2));
}

double f_quantile(double p, double d1, double d2) {
    if (!(p > 0.0 && p < 1.0)) throw RangeError("f_quantile: p must lie in (0,1)");
    double lo = 0.0, hi = 1.0;
    while (f_cdf(hi, d1, d2) < p) {
        hi *= 2.0;
        if (hi > 1e12) break;
    }
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (f_cdf(mid, d1, d2) < p)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= 1e-13 * std::max(1.0, hi)) break;
    }
    return 0.5 * (lo + hi);
}

double drc_mean_radius(std::size_t n, std::size_t n0, double quantile) {
    if (n0 <= n) throw ConfigError("drc_mean_radius: N0 must exceed the dimension");
    if (!(quantile > 0.0 && quantile < 1.0))
        throw ConfigError("drc_mean_radius: quantile must lie in (0,1)");
    const double nd = static_cast<double>(n);
    const double n0d = static_cast<double>(n0);
    const double scale = nd * (n0d - 1.0) / (n0d * (n0d - nd));
    return scale * f_quantile(quantile, nd, n0d - nd);
}

}  // namespace gdrc
