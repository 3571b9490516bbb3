/******************************************************************/
// numeric.cpp
/******************************************************************/
#include "epinet/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace epinet {

namespace {

// series expansion of P(a, x), reliable for x < a + 1
double gamma_p_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    double ap = a;
    for (int i = 0; i < 1000; ++i) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * 1e-16) {
            return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
        }
    }
    throw NumericError("incomplete gamma series failed to converge");
}

// Lentz continued fraction for Q(a, x), reliable for x >= a + 1
double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 1000; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < 1e-16) {
            return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
        }
    }
    throw NumericError("incomplete gamma continued fraction failed to converge");
}

} // namespace

double gamma_p(double a, double x) {
    if (a <= 0.0) throw NumericError("gamma_p requires a > 0");
    if (x < 0.0) throw NumericError("gamma_p requires x >= 0");
    if (x == 0.0) return 0.0;
    return (x < a + 1.0) ? gamma_p_series(a, x) : 1.0 - gamma_q_cf(a, x);
}

double gamma_quantile_standard(double a, double p) {
    if (p < 0.0 || p > 1.0) throw NumericError("quantile level outside [0, 1]");
    if (p == 0.0) return 0.0;
    if (p == 1.0) return std::numeric_limits<double>::infinity();

    // Wilson-Hilferty starting point, clipped into a search bracket
    const double z = [&] {
        // inverse normal CDF via Newton on erfc is overkill here; a
        // coarse start suffices because we polish with bisected Newton
        double lo = -10.0, hi = 10.0;
        for (int i = 0; i < 80; ++i) {
            const double mid = 0.5 * (lo + hi);
            (normal_cdf(mid) < p ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    }();
    double x = a * std::pow(1.0 - 1.0 / (9.0 * a) + z / (3.0 * std::sqrt(a)), 3.0);
    if (!(x > 0.0) || !std::isfinite(x)) x = a;

    // grow a hard bracket around the root
    double lo = x, hi = x;
    while (gamma_p(a, lo) > p && lo > 1e-300) lo *= 0.5;
    while (gamma_p(a, hi) < p && hi < 1e300) hi *= 2.0;

    for (int i = 0; i < 200; ++i) {
        const double f = gamma_p(a, x) - p;
        (f < 0.0 ? lo : hi) = x;
        const double dens = std::exp((a - 1.0) * std::log(x) - x - std::lgamma(a));
        double step = (dens > 0.0) ? f / dens : 0.0;
        double next = x - step;
        if (!(next > lo) || !(next < hi)) next = 0.5 * (lo + hi); // Newton left the bracket
        if (std::fabs(next - x) <= 1e-14 * std::max(1.0, std::fabs(x))) return next;
        x = next;
    }
    return x;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

long double argmax_1d(const std::function<long double(long double)>& f, long double lo,
                      long double hi, long double tol_rel) {
    if (!(lo < hi)) throw NumericError("argmax_1d requires lo < hi");
    const long double gr = 0.6180339887498948482L; // 1/phi
    long double a = lo, b = hi;
    long double x1 = b - gr * (b - a);
    long double x2 = a + gr * (b - a);
    long double f1 = f(x1), f2 = f(x2);
    const long double tol = tol_rel * std::max(1.0L, std::fabs(hi));
    while (b - a > tol) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = f(x1);
        }
    }
    long double x = 0.5L * (a + b);
    // parabolic polish: fit through (x-h, x, x+h) and jump to the vertex
    for (int i = 0; i < 3; ++i) {
        const long double h = std::max(std::fabs(x), 1.0L) * 1e-6L;
        const long double fm = f(x - h), f0 = f(x), fp = f(x + h);
        const long double denom = fm - 2.0L * f0 + fp;
        if (!(denom < 0.0L)) break; // flat or non-concave at the scale of h
        const long double step = 0.5L * h * (fm - fp) / denom;
        if (std::fabs(step) >= h) break;
        x += step;
    }
    return x;
}

long double fd_derivative(const std::function<long double(long double)>& f, long double x,
                          long double scale) {
    const long double h = 1e-5L * std::max(std::fabs(x), scale);
    auto central = [&](long double step) {
        return (f(x + step) - f(x - step)) / (2.0L * step);
    };
    const long double d1 = central(h);
    const long double d2 = central(h / 2.0L);
    return (4.0L * d2 - d1) / 3.0L;
}

double ks_statistic(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

double ks_pvalue(double stat, std::size_t n, std::size_t m) {
    const double ne = static_cast<double>(n) * static_cast<double>(m) /
                      static_cast<double>(n + m);
    const double lambda = (std::sqrt(ne) + 0.12 + 0.11 / std::sqrt(ne)) * stat;
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = 2.0 * ((k % 2 == 1) ? 1.0 : -1.0) *
                            std::exp(-2.0 * lambda * lambda * k * k);
        sum += term;
        if (std::fabs(term) < 1e-12) break;
    }
    return std::clamp(sum, 0.0, 1.0);
}

double mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double variance(const std::vector<double>& v) {
    const double mu = mean(v);
    double s = 0.0;
    for (double x : v) s += (x - mu) * (x - mu);
    return s / static_cast<double>(v.size());
}

double median(std::vector<double> v) { return quantile(std::move(v), 0.5); }

double quantile(std::vector<double> v, double p) {
    if (v.empty()) throw NumericError("quantile of empty sample");
    std::sort(v.begin(), v.end());
    const double pos = p * static_cast<double>(v.size() - 1);
    const std::size_t k = static_cast<std::size_t>(pos);
    if (k + 1 >= v.size()) return v.back();
    const double frac = pos - static_cast<double>(k);
    return v[k] + frac * (v[k + 1] - v[k]);
}

} // namespace epinet
