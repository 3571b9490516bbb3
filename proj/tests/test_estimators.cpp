/******************************************************************/
// test_estimators.cpp -- closed-form fits, conjugate updates, the
// three network treatments, open-population estimation, and exact
// rate intervals.
//
// Counts and exposures are chosen by hand wherever possible so every
// expected value is plain division; the gamma-quantile endpoints use
// values frozen from an independent reference implementation.
/******************************************************************/
#include <doctest.h>

#include <cmath>
#include <limits>

#include "epinet/core.hpp"
#include "epinet/estimators.hpp"
#include "epinet/likelihood.hpp"
#include "epinet/rng.hpp"
#include "epinet/simulator.hpp"

using namespace epinet;

namespace {

// the desk scenario used throughout: a recoverable ground truth
ModelParams desk_params() {
    ModelParams p;
    p.beta = 0.05;
    p.gamma = 0.12;
    p.alpha = {0.005, 0.001, 0.005};
    p.omega = {0.05, 0.1, 0.05};
    return p;
}

SufficientStats hand_stats() {
    SufficientStats st;
    st.n_e = 6;
    st.n_r = 12;
    st.exp_si = 200.0;
    st.exp_i = 100.0;
    st.c = {5, 2, 1};
    st.exp_md = {1000.0, 2000.0, 200.0};
    st.d = {10, 20, 5};
    st.exp_m = {200.0, 200.0, 100.0};
    return st;
}

} // namespace

TEST_SUITE("estimators") {

TEST_CASE("gamma distribution helpers") {
    const GammaDist g{6.0, 150.0};
    CHECK(g.mean() == doctest::Approx(0.04));
    CHECK(g.sd() == doctest::Approx(std::sqrt(6.0) / 150.0));
    // frozen reference quantiles for Ga(shape 6, rate 150)
    CHECK(g.quantile(0.025) == doctest::Approx(0.0146792950232723).epsilon(1e-10));
    CHECK(g.quantile(0.975) == doctest::Approx(0.0777888805288178).epsilon(1e-10));
}

TEST_CASE("default priors are vague with the documented means") {
    const PriorSet p = PriorSet::defaults();
    CHECK(p.beta.shape == 1.0);
    CHECK(p.beta.mean() == doctest::Approx(0.02));
    CHECK(p.gamma.mean() == doctest::Approx(0.1));
    for (const auto& a : p.alpha) CHECK(a.mean() == doctest::Approx(0.004));
    for (const auto& w : p.omega) CHECK(w.mean() == doctest::Approx(0.06));
    REQUIRE(p.xi.has_value());
    CHECK(p.xi->mean() == doctest::Approx(0.004));
}

TEST_CASE("closed-form MLE is count over exposure") {
    const MleFit fit = mle_closed(hand_stats());
    CHECK(fit.nonidentifiable.empty());
    CHECK(fit.params.beta == doctest::Approx(0.03));
    CHECK(fit.params.gamma == doctest::Approx(0.12));
    CHECK(fit.params.alpha[0] == doctest::Approx(0.005));
    CHECK(fit.params.alpha[1] == doctest::Approx(0.001));
    CHECK(fit.params.alpha[2] == doctest::Approx(0.005));
    CHECK(fit.params.omega[0] == doctest::Approx(0.05));
    CHECK(fit.params.omega[1] == doctest::Approx(0.1));
    CHECK(fit.params.omega[2] == doctest::Approx(0.05));
}

TEST_CASE("zero exposure is flagged as non-identifiable") {
    SufficientStats st = hand_stats();
    st.exp_md[2] = 0.0; // one event class never at risk
    st.c[2] = 0;
    SufficientStats st2 = st;
    st2.c[2] = 3; // events without exposure: impossible rate

    const MleFit zero = mle_closed(st);
    CHECK(zero.params.alpha[2] == 0.0);
    REQUIRE(zero.nonidentifiable.size() == 1);
    CHECK(zero.nonidentifiable[0] == "alpha_ii");

    const MleFit inf = mle_closed(st2);
    CHECK(std::isinf(inf.params.alpha[2]));
    CHECK(inf.nonidentifiable.size() == 1);
}

TEST_CASE("canonical parameter names") {
    CHECK(std::string(kParamNames[0]) == "beta");
    CHECK(std::string(kParamNames[1]) == "gamma");
    CHECK(std::string(kParamNames[4]) == "alpha_ii");
    CHECK(std::string(kParamNames[7]) == "omega_ii");
}

TEST_CASE("conjugate posterior adds counts to shapes and exposures to rates") {
    const PriorSet priors = PriorSet::defaults();

    SUBCASE("closed statistics never produce a xi posterior") {
        const PosteriorSet post = posterior_params(hand_stats(), priors);
        CHECK(post.beta.shape == doctest::Approx(7.0));
        CHECK(post.beta.rate == doctest::Approx(250.0));
        CHECK(post.gamma.shape == doctest::Approx(13.0));
        CHECK(post.gamma.rate == doctest::Approx(110.0));
        CHECK(post.alpha[1].shape == doctest::Approx(3.0));
        CHECK(post.alpha[1].rate == doctest::Approx(2250.0));
        CHECK(post.omega[0].shape == doctest::Approx(11.0));
        CHECK(post.omega[0].rate == doctest::Approx(200.0 + 1.0 / 0.06));
        CHECK(!post.xi.has_value());
        // the posterior mean sits between the prior mean and the MLE
        CHECK(post.beta.mean() > priors.beta.mean());
        CHECK(post.beta.mean() < 0.03);
    }

    SUBCASE("labelled statistics split beta and xi") {
        SufficientStats st = hand_stats();
        st.n_e = 10;
        st.inf_nbr = {1, 2, 0, 1, 1, 3, 0, 2, 0, 0};
        st.exp_s = 800.0;
        attach_labels(st, {1, 1, 0, 1, 1, 1, 0, 1, 0, 0});
        const PosteriorSet post = posterior_params(st, priors);
        CHECK(post.beta.shape == doctest::Approx(7.0)); // 1 + six internal cases
        CHECK(post.beta.rate == doctest::Approx(250.0));
        REQUIRE(post.xi.has_value());
        CHECK(post.xi->shape == doctest::Approx(5.0)); // 1 + four external cases
        CHECK(post.xi->rate == doctest::Approx(1050.0));
    }
}

TEST_CASE("network treatments on a three-person hand trace") {
    // 0 infectious, 1 and 2 susceptible; 0-1 linked at the start;
    // 0-2 activates at t=1; 2 is infected at t=2; observed to t=3.
    ProcessState g0(3);
    g0.set_status(0, DiseaseStatus::Infectious);
    g0.add_edge(0, 1);
    const EventTrace tr = {Event::link_on(1.0, 0, 2), Event::infection(2.0, 2)};
    const NetworkTreatmentFit fit = mle_network_treatments(g0, tr, 3.0);

    CHECK(fit.n_e == 1);
    // dynamic: S-I link-time is 1*1 + 2*1 + 1*1
    CHECK(fit.dynamic_exposure == doctest::Approx(4.0));
    // frozen network: only 0-1 exists, S-I for the whole window
    CHECK(fit.static_exposure == doctest::Approx(3.0));
    // homogeneous mixing: S*I is 2*1 for two units, then 1*2 for one
    CHECK(fit.mixing_exposure == doctest::Approx(6.0));
    CHECK(fit.dynamic_beta == doctest::Approx(0.25));
    CHECK(fit.static_beta == doctest::Approx(1.0 / 3.0));
    CHECK(fit.mixing_beta == doctest::Approx(1.0 / 6.0));
}

TEST_CASE("mixing exposure dominates dynamic exposure on simulated data") {
    for (int s = 0; s < 5; ++s) {
        Rng graph_rng(70 + static_cast<std::uint64_t>(s));
        SimConfig cfg;
        cfg.g0 = erdos_renyi(50, 0.1, graph_rng);
        cfg.i0 = 2;
        cfg.params = desk_params();
        cfg.t_max = 30.0;
        cfg.seed = 7000 + static_cast<std::uint64_t>(s);
        const SimResult res = simulate(cfg);
        const NetworkTreatmentFit fit = mle_network_treatments(res.g0, res.events, cfg.t_max);
        // every S-I link is also an S-I person pair
        CHECK(fit.mixing_exposure >= fit.dynamic_exposure);
        if (fit.n_e > 0) CHECK(fit.mixing_beta <= fit.dynamic_beta);
        const SufficientStats st = sufficient_stats(res.g0, res.events, cfg.t_max);
        CHECK(fit.dynamic_exposure == doctest::Approx(st.exp_si));
        CHECK(fit.n_e == st.n_e);
    }
}

TEST_CASE("simulation MLEs land inside wide exact intervals around the truth") {
    // one frozen, well-mixed realization: every per-parameter 99.9%
    // interval derived from its count and exposure must cover the
    // generating value
    Rng graph_rng(5150);
    SimConfig cfg;
    cfg.g0 = erdos_renyi(150, 0.08, graph_rng);
    cfg.i0 = 3;
    cfg.params = desk_params();
    cfg.t_max = 40.0;
    cfg.seed = 31337;
    const SimResult res = simulate(cfg);
    const SufficientStats st = sufficient_stats(res.g0, res.events, cfg.t_max);
    REQUIRE(st.n_e >= 20);
    REQUIRE(st.n_r >= 20);

    auto covers = [](long count, double exposure, double truth) {
        const Interval ci = rate_confidence_interval(count, exposure, 0.999);
        return ci.lo <= truth && truth <= ci.hi;
    };
    CHECK(covers(st.n_e, st.exp_si, cfg.params.beta));
    CHECK(covers(st.n_r, st.exp_i, cfg.params.gamma));
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK(covers(st.c[k], st.exp_md[k], cfg.params.alpha[k]));
        CHECK(covers(st.d[k], st.exp_m[k], cfg.params.omega[k]));
    }
}

TEST_CASE("open-population estimation") {
    SUBCASE("labelled closed form") {
        SufficientStats st;
        st.n_e = 10;
        st.inf_nbr = {1, 1, 0, 2, 1, 1, 0, 1, 0, 0};
        st.exp_si = 200.0;
        st.exp_s = 800.0;
        attach_labels(st, {1, 1, 0, 1, 1, 1, 0, 1, 0, 0});
        const OpenFit fit = mle_open_labeled(st);
        CHECK(fit.beta == doctest::Approx(0.03));
        CHECK(fit.xi == doctest::Approx(0.005));
        CHECK(fit.kappa == doctest::Approx(1.0 / 6.0));
    }

    SUBCASE("labelled fit requires labels") {
        CHECK_THROWS_AS(mle_open_labeled(hand_stats()), NumericError);
    }

    SUBCASE("numeric profile: interior root versus boundary") {
        SufficientStats st;
        st.n_e = 3;
        st.inf_nbr = {1, 1, 4};
        st.exp_si = 30.0;
        st.exp_s = 20.0;
        // score at zero: 1 + 1 + 1/4 - (3/30)*20 = 0.25 > 0 and the
        // large-kappa tail is negative, so an interior root exists
        const OpenFit interior = mle_open_numeric(st);
        CHECK(interior.kappa > 0.0);

        st.inf_nbr = {1, 1, 1};
        st.n_e = 3;
        st.exp_s = 30.0; // score at zero: 3 - 3 = 0, boundary solution
        const OpenFit boundary = mle_open_numeric(st);
        CHECK(boundary.kappa == 0.0);
        CHECK(boundary.xi == 0.0);
        CHECK(boundary.beta == doctest::Approx(0.1));
    }

    SUBCASE("numeric profile solves the score equation") {
        SufficientStats st;
        st.n_e = 3;
        st.inf_nbr = {0, 1, 2};
        st.orphan_infection = true;
        st.exp_si = 30.0;
        st.exp_s = 60.0;
        const OpenFit fit = mle_open_numeric(st);
        REQUIRE(fit.kappa > 0.0);
        // independent restatement of the stationarity condition
        double score = 0.0;
        for (long nbrs : st.inf_nbr) score += 1.0 / (static_cast<double>(nbrs) + fit.kappa);
        score -= fit.beta * st.exp_s;
        CHECK(std::abs(score) < 1e-9);
        CHECK(fit.beta ==
              doctest::Approx(3.0 / (st.exp_si + fit.kappa * st.exp_s)).epsilon(1e-10));
        CHECK(fit.xi == doctest::Approx(fit.kappa * fit.beta));
        // the profile log-likelihood is maximal at the root
        const long double at = loglik_open_bk(st, fit.beta, fit.kappa);
        for (double f : {0.5, 0.9, 1.1, 2.0}) {
            const long double kap = fit.kappa * f;
            const long double bet = 3.0L / (st.exp_si + kap * st.exp_s);
            CHECK(loglik_open_bk(st, bet, kap) <= at);
        }
    }

    SUBCASE("all-orphan data with tiny susceptible exposure has no root") {
        SufficientStats st;
        st.n_e = 3;
        st.inf_nbr = {0, 0, 0};
        st.orphan_infection = true;
        st.exp_si = 10.0;
        st.exp_s = 1.0;
        CHECK_THROWS_AS(mle_open_numeric(st), NoRoot);
    }

    SUBCASE("no infections yields the zero fit") {
        SufficientStats st;
        st.exp_si = 10.0;
        st.exp_s = 10.0;
        const OpenFit fit = mle_open_numeric(st);
        CHECK(fit.beta == 0.0);
        CHECK(fit.xi == 0.0);
    }

    SUBCASE("labelled and numeric fits agree on well-identified simulated data") {
        Rng graph_rng(414);
        SimConfig cfg;
        cfg.g0 = erdos_renyi(120, 0.1, graph_rng);
        cfg.i0 = 2;
        cfg.params = desk_params();
        cfg.params.beta = 0.06;
        cfg.params.xi = 0.004;
        cfg.t_max = 40.0;
        cfg.seed = 2024;
        const SimResult res = simulate(cfg);
        SufficientStats st = sufficient_stats(res.g0, res.events, cfg.t_max);
        attach_labels(st, res.infection_internal);
        REQUIRE(st.n_e_ext >= 3); // enough external cases to identify xi
        const OpenFit lab = mle_open_labeled(st);
        const OpenFit num = mle_open_numeric(st);
        CHECK(std::abs(num.beta - lab.beta) / lab.beta < 0.5);
        CHECK(std::abs(num.xi - lab.xi) / lab.xi < 0.75);
    }
}

TEST_CASE("exact rate intervals") {
    SUBCASE("frozen endpoints for 48 events over 1600 units") {
        const Interval ci = rate_confidence_interval(48, 1600.0, 0.95);
        CHECK(ci.lo == doctest::Approx(0.022119631764677).epsilon(1e-10));
        CHECK(ci.hi == doctest::Approx(0.0397756476138295).epsilon(1e-10));
        CHECK(ci.lo < 48.0 / 1600.0);
        CHECK(ci.hi > 48.0 / 1600.0);
    }

    SUBCASE("zero events pin the lower end at zero") {
        const Interval ci = rate_confidence_interval(0, 100.0, 0.95);
        CHECK(ci.lo == 0.0);
        CHECK(ci.hi == doctest::Approx(-std::log(0.025) / 100.0).epsilon(1e-12));
    }

    SUBCASE("wider level, wider interval") {
        const Interval narrow = rate_confidence_interval(30, 500.0, 0.9);
        const Interval wide = rate_confidence_interval(30, 500.0, 0.99);
        CHECK(wide.lo < narrow.lo);
        CHECK(wide.hi > narrow.hi);
    }

    SUBCASE("non-positive exposure is rejected") {
        CHECK_THROWS_AS(rate_confidence_interval(3, 0.0, 0.95), NumericError);
    }
}

} // TEST_SUITE
