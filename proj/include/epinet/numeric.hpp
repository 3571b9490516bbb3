/******************************************************************/
// numeric.hpp
//
// Small numerical toolbox: regularised incomplete gamma and its
// inverse (for credible/confidence limits), a one-dimensional
// maximiser, Richardson-extrapolated derivatives in extended
// precision (for gradient checks), Kolmogorov-Smirnov helpers, and
// assorted summary statistics.
/******************************************************************/
#ifndef EPINET_NUMERIC_HPP
#define EPINET_NUMERIC_HPP

#include <functional>
#include <stdexcept>
#include <vector>

namespace epinet {

class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// Regularised lower incomplete gamma P(a, x) = gamma(a, x) / Gamma(a).
double gamma_p(double a, double x);

// Quantile of the standard (rate 1) gamma distribution: x with P(a, x) = p.
double gamma_quantile_standard(double a, double p);

// Standard normal CDF.
double normal_cdf(double x);

// Maximise a unimodal function on [lo, hi] by golden-section search
// followed by parabolic refinement; returns the abscissa.
long double argmax_1d(const std::function<long double(long double)>& f, long double lo,
                      long double hi, long double tol_rel = 1e-13L);

// Central difference with one Richardson step, evaluated in extended
// precision. `scale` sets the base step h = 1e-5 * max(|x|, scale).
long double fd_derivative(const std::function<long double(long double)>& f, long double x,
                          long double scale = 1.0L);

// Two-sample Kolmogorov-Smirnov statistic and asymptotic p-value.
double ks_statistic(std::vector<double> a, std::vector<double> b);
double ks_pvalue(double stat, std::size_t n, std::size_t m);

double mean(const std::vector<double>& v);
double variance(const std::vector<double>& v); // denominator n
double median(std::vector<double> v);
double quantile(std::vector<double> v, double p); // type-7 interpolation

} // namespace epinet

#endif
