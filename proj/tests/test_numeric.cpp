/******************************************************************/
// test_numeric.cpp -- incomplete gamma / quantile against frozen
// reference values, maximiser and derivative tolerances, KS helpers.
/******************************************************************/
#include <doctest.h>

#include <cmath>

#include "epinet/numeric.hpp"
#include "epinet/rng.hpp"

using namespace epinet;

TEST_SUITE("numeric") {

// Reference values computed with an independent implementation of
// the regularised incomplete gamma function.
TEST_CASE("regularised lower incomplete gamma") {
    CHECK(gamma_p(1.0, 1.0) == doctest::Approx(0.632120558828558).epsilon(1e-12));
    CHECK(gamma_p(3.0, 2.5) == doctest::Approx(0.45618688411667).epsilon(1e-12));
    CHECK(gamma_p(0.5, 0.25) == doctest::Approx(0.520499877813047).epsilon(1e-12));
    CHECK(gamma_p(10.0, 14.2) == doctest::Approx(0.899736474856564).epsilon(1e-12));
    CHECK(gamma_p(48.0, 48.0) == doctest::Approx(0.519196237319656).epsilon(1e-12));
    CHECK(gamma_p(2.0, 0.0) == 0.0);
}

TEST_CASE("gamma quantiles against frozen references") {
    // quantile(p) of Gamma(shape, rate) = standard quantile / rate
    CHECK(gamma_quantile_standard(6.0, 0.025) / 150.0 ==
          doctest::Approx(0.0146792950232723).epsilon(1e-10));
    CHECK(gamma_quantile_standard(6.0, 0.975) / 150.0 ==
          doctest::Approx(0.0777888805288178).epsilon(1e-10));
    CHECK(gamma_quantile_standard(1.0, 0.5) / 50.0 ==
          doctest::Approx(0.0138629436111989).epsilon(1e-10));
    CHECK(gamma_quantile_standard(48.0, 0.025) / 1600.0 ==
          doctest::Approx(0.022119631764677).epsilon(1e-10));
    CHECK(gamma_quantile_standard(49.0, 0.975) / 1600.0 ==
          doctest::Approx(0.0397756476138295).epsilon(1e-10));
    CHECK(gamma_quantile_standard(0.5, 0.9) / 2.0 ==
          doctest::Approx(0.676385863523851).epsilon(1e-10));
    CHECK(gamma_quantile_standard(20.0, 0.001) ==
          doctest::Approx(8.95821326762601).epsilon(1e-10));
    CHECK(gamma_quantile_standard(3.5, 0.5) / 0.25 ==
          doctest::Approx(12.691622391043).epsilon(1e-10));
}

TEST_CASE("quantile and cdf are inverse") {
    for (const double a : {0.7, 1.0, 5.0, 48.0}) {
        for (const double p : {0.01, 0.3, 0.5, 0.9, 0.999}) {
            CHECK(gamma_p(a, gamma_quantile_standard(a, p)) == doctest::Approx(p).epsilon(1e-9));
        }
    }
}

TEST_CASE("normal cdf spot values") {
    CHECK(normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(normal_cdf(1.0) == doctest::Approx(0.841344746068543).epsilon(1e-12));
    CHECK(normal_cdf(-1.96) == doctest::Approx(0.0249978951482204).epsilon(1e-12));
    CHECK(normal_cdf(2.5) == doctest::Approx(0.993790334674224).epsilon(1e-12));
}

TEST_CASE("argmax recovers analytic maxima to high precision") {
    // count log(x) - x * expo peaks at count/expo, the shape shared by
    // every rate term in this project
    auto poisson_term = [](long double count, long double expo) {
        return [count, expo](long double x) { return count * std::log(x) - x * expo; };
    };
    const long double x1 = argmax_1d(poisson_term(48.0L, 1600.0L), 1e-6L, 1.0L);
    CHECK(static_cast<double>(std::fabs(x1 - 0.03L) / 0.03L) < 1e-8);

    const long double x2 = argmax_1d(poisson_term(5.0L, 9.0L), 1e-6L, 10.0L);
    CHECK(static_cast<double>(std::fabs(x2 - 5.0L / 9.0L) / (5.0L / 9.0L)) < 1e-8);

    // a plain parabola
    const long double x3 =
        argmax_1d([](long double x) { return -(x - 2.5L) * (x - 2.5L); }, 0.0L, 10.0L);
    CHECK(static_cast<double>(std::fabs(x3 - 2.5L)) < 1e-8);
}

TEST_CASE("finite differences hit analytic derivatives hard") {
    auto f = [](long double x) { return 48.0L * std::log(x) - 1600.0L * x; };
    // derivative at the maximum is zero
    CHECK(static_cast<double>(std::fabs(fd_derivative(f, 0.03L, 0.03L))) < 1e-8);
    // and matches 48/x - 1600 elsewhere
    const long double d = fd_derivative(f, 0.05L, 0.05L);
    CHECK(static_cast<double>(std::fabs(d - (48.0L / 0.05L - 1600.0L))) < 1e-6);
}

TEST_CASE("two-sample KS accepts same distribution, rejects different") {
    Rng rng(23);
    std::vector<double> a, b, c;
    for (int i = 0; i < 4000; ++i) {
        a.push_back(rng.exponential(1.0));
        b.push_back(rng.exponential(1.0));
        c.push_back(rng.exponential(1.6));
    }
    const double same = ks_pvalue(ks_statistic(a, b), a.size(), b.size());
    const double diff = ks_pvalue(ks_statistic(a, c), a.size(), c.size());
    CHECK(same > 0.01);
    CHECK(diff < 1e-6);
}

TEST_CASE("summary helpers") {
    CHECK(mean({1.0, 2.0, 3.0, 6.0}) == doctest::Approx(3.0));
    CHECK(variance({1.0, 1.0, 1.0}) == doctest::Approx(0.0));
    CHECK(median({5.0, 1.0, 9.0}) == doctest::Approx(5.0));
    CHECK(median({4.0, 1.0, 9.0, 5.0}) == doctest::Approx(4.5));
    CHECK(quantile({0.0, 1.0, 2.0, 3.0, 4.0}, 0.25) == doctest::Approx(1.0));
}

} // TEST_SUITE
