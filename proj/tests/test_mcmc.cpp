/******************************************************************/
// test_mcmc.cpp -- Gibbs sampler, chain diagnostics, and the
// imputation timing harness.
//
// The decisive sampler test uses complete data: with nothing latent,
// every sweep draws from one fixed conjugate posterior, so the chain
// must be iid draws whose law we can verify exactly against direct
// gamma sampling. Diagnostics are checked on synthetic series whose
// effective sample sizes are known analytically.
/******************************************************************/
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "epinet/augmentation.hpp"
#include "epinet/estimators.hpp"
#include "epinet/likelihood.hpp"
#include "epinet/mcmc.hpp"
#include "epinet/numeric.hpp"
#include "epinet/rng.hpp"
#include "epinet/simulator.hpp"

using namespace epinet;

namespace {

ModelParams desk_params() {
    ModelParams p;
    p.beta = 0.05;
    p.gamma = 0.12;
    p.alpha = {0.005, 0.001, 0.005};
    p.omega = {0.05, 0.1, 0.05};
    return p;
}

PartialData make_partial(std::uint64_t graph_seed, std::uint64_t sim_seed, double eta,
                         bool open = false) {
    Rng graph_rng(graph_seed);
    SimConfig cfg;
    cfg.g0 = erdos_renyi(80, 0.1, graph_rng);
    cfg.i0 = 2;
    cfg.params = desk_params();
    if (open) cfg.params.xi = 0.004;
    cfg.t_max = 40.0;
    cfg.seed = sim_seed;
    const SimResult res = simulate(cfg);
    Rng hide_rng(sim_seed + 999);
    return synthesize_missingness(res.g0, res.events, cfg.t_max, eta, 7.0, hide_rng,
                                  open ? res.infection_internal : std::vector<std::uint8_t>{});
}

} // namespace

TEST_SUITE("mcmc") {

TEST_CASE("method names round trip") {
    CHECK(parse_impute_method("darci") == ImputeMethod::Darci);
    CHECK(parse_impute_method("reject") == ImputeMethod::Reject);
    CHECK(parse_impute_method("mh") == ImputeMethod::Mh);
    for (ImputeMethod m : {ImputeMethod::Darci, ImputeMethod::Reject, ImputeMethod::Mh})
        CHECK(parse_impute_method(impute_method_name(m)) == m);
    CHECK_THROWS_AS(parse_impute_method("metropolis"), std::invalid_argument);
}

TEST_CASE("effective sample size") {
    SUBCASE("iid draws keep nearly the full budget") {
        Rng rng(3);
        std::vector<double> x;
        for (int i = 0; i < 5000; ++i) x.push_back(rng.normal());
        const double e = ess(x);
        CHECK(e > 0.75 * 5000);
        CHECK(e <= 5000);
    }

    SUBCASE("an AR(1) chain at rho = 0.5 keeps about a third") {
        Rng rng(4);
        const double rho = 0.5, sd = std::sqrt(1.0 - rho * rho);
        std::vector<double> x = {0.0};
        for (int i = 1; i < 20000; ++i) x.push_back(rho * x.back() + sd * rng.normal());
        const double e = ess(x);
        CHECK(e == doctest::Approx(20000.0 / 3.0).epsilon(0.15));
    }

    SUBCASE("degenerate series are refused") {
        CHECK_THROWS_AS(ess(std::vector<double>(50, 1.25)), DegenerateChain);
        CHECK_THROWS_AS(ess({1.0, 2.0, 3.0}), DegenerateChain);
    }
}

TEST_CASE("Geweke window comparison") {
    SUBCASE("stationary iid series passes") {
        Rng rng(5);
        std::vector<double> x;
        for (int i = 0; i < 2000; ++i) x.push_back(rng.normal());
        const GewekeResult g = geweke(x);
        CHECK(std::abs(g.z) < 3.0);
        CHECK(g.p > 0.002);
    }

    SUBCASE("stationary autocorrelated series passes") {
        Rng rng(6);
        const double rho = 0.7, sd = std::sqrt(1.0 - rho * rho);
        std::vector<double> x = {0.0};
        for (int i = 1; i < 4000; ++i) x.push_back(rho * x.back() + sd * rng.normal());
        const GewekeResult g = geweke(x);
        CHECK(std::abs(g.z) < 3.0);
    }

    SUBCASE("a drifting series fails loudly") {
        Rng rng(7);
        std::vector<double> x;
        for (int i = 0; i < 2000; ++i)
            x.push_back(static_cast<double>(i) / 2000.0 + 0.1 * rng.normal());
        const GewekeResult g = geweke(x);
        CHECK(std::abs(g.z) > 5.0);
        CHECK(g.p < 1e-4);
    }

    SUBCASE("short or flat series are refused") {
        CHECK_THROWS_AS(geweke(std::vector<double>(50, 0.5)), DegenerateChain);
        CHECK_THROWS_AS(geweke(std::vector<double>(500, 0.5)), DegenerateChain);
    }
}

TEST_CASE("complete data: the sampler is iid conjugate draws") {
    const PartialData pd = make_partial(61, 6100, /*eta=*/0.0);
    REQUIRE(pd.hidden.empty());
    const PriorSet priors = PriorSet::defaults();
    const Chain chain = gibbs_run(pd, priors, 3000, 0, 1, ImputeMethod::Darci, 99);
    REQUIRE(chain.draws.size() == 3000);
    REQUIRE(chain.names.size() == 8);
    CHECK(chain.names[0] == "beta");
    CHECK(chain.method == "darci");

    const SufficientStats st = sufficient_stats(pd.g0, pd.events, pd.t_max);
    const PosteriorSet post = posterior_params(st, priors);

    // every column's mean must sit on its conjugate posterior mean
    const GammaDist dists[8] = {post.beta,     post.gamma,    post.alpha[0], post.alpha[1],
                                post.alpha[2], post.omega[0], post.omega[1], post.omega[2]};
    for (std::size_t j = 0; j < 8; ++j) {
        const std::vector<double> col = chain.column(j);
        const double se = dists[j].sd() / std::sqrt(3000.0);
        CHECK(std::abs(mean(col) - dists[j].mean()) < 4.5 * se);
    }

    // and the beta column must match direct gamma sampling in law
    Rng direct_rng(123456);
    std::vector<double> direct;
    for (int i = 0; i < 3000; ++i)
        direct.push_back(direct_rng.gamma(post.beta.shape, post.beta.rate));
    const double d = ks_statistic(chain.column(0), direct);
    CHECK(ks_pvalue(d, 3000, 3000) > 0.01);
}

TEST_CASE("chain bookkeeping: burn-in, thinning, reproducibility") {
    const PartialData pd = make_partial(62, 6200, 0.5);
    const PriorSet priors = PriorSet::defaults();

    const Chain a = gibbs_run(pd, priors, 100, 20, 4, ImputeMethod::Darci, 7);
    CHECK(a.draws.size() == 20); // sweeps 24, 28, ..., 100
    CHECK(a.burnin == 20);
    CHECK(a.thin == 4);

    const Chain b = gibbs_run(pd, priors, 100, 20, 4, ImputeMethod::Darci, 7);
    CHECK(a.draws == b.draws); // same seed, same chain

    const Chain c = gibbs_run(pd, priors, 100, 20, 4, ImputeMethod::Darci, 8);
    CHECK(a.draws != c.draws);

    CHECK_THROWS_AS(gibbs_run(pd, priors, 10, 10, 1, ImputeMethod::Darci, 1),
                    std::invalid_argument);
}

TEST_CASE("missing recoveries: every method recovers the rates to a factor") {
    const PartialData pd = make_partial(63, 6300, 0.5);
    REQUIRE(!pd.hidden.empty());
    const PriorSet priors = PriorSet::defaults();

    std::vector<std::vector<std::vector<double>>> all_draws;
    for (ImputeMethod m : {ImputeMethod::Darci, ImputeMethod::Reject, ImputeMethod::Mh}) {
        const Chain chain = gibbs_run(pd, priors, 600, 100, 1, m, 555);
        REQUIRE(chain.draws.size() == 500);
        for (const auto& row : chain.draws)
            for (double x : row) CHECK(x > 0.0);
        const double beta_mean = mean(chain.column(0));
        const double gamma_mean = mean(chain.column(1));
        CHECK(beta_mean > 0.05 / 2.5);
        CHECK(beta_mean < 0.05 * 2.5);
        CHECK(gamma_mean > 0.12 / 2.5);
        CHECK(gamma_mean < 0.12 * 2.5);
        all_draws.push_back(chain.draws);
    }
    // the three imputation kernels genuinely visit different states
    CHECK(all_draws[0] != all_draws[1]);
    CHECK(all_draws[0] != all_draws[2]);
}

TEST_CASE("two periods sharpen the posterior") {
    const PartialData p1 = make_partial(64, 6400, 0.5);
    const PartialData p2 = make_partial(65, 6500, 0.5);
    const PriorSet priors = PriorSet::defaults();

    const Chain one = gibbs_run(p1, priors, 800, 200, 1, ImputeMethod::Darci, 31);
    const Chain two = gibbs_run({p1, p2}, priors, 800, 200, 1, ImputeMethod::Darci, 31);
    const double sd_one = std::sqrt(variance(one.column(1)));
    const double sd_two = std::sqrt(variance(two.column(1)));
    CHECK(sd_two < sd_one * 1.05); // more recoveries, tighter gamma posterior
    CHECK(mean(two.column(1)) > 0.12 / 2.0);
    CHECK(mean(two.column(1)) < 0.12 * 2.0);
}

TEST_CASE("open-population data adds a ninth column") {
    const PartialData pd = make_partial(66, 6600, 0.5, /*open=*/true);
    REQUIRE(pd.open());
    const PriorSet priors = PriorSet::defaults();
    const Chain chain = gibbs_run(pd, priors, 400, 100, 1, ImputeMethod::Darci, 71);
    REQUIRE(chain.names.size() == 9);
    CHECK(chain.names.back() == "xi");
    const std::vector<double> xi = chain.column(8);
    for (double x : xi) CHECK(x > 0.0);
    CHECK(mean(xi) > 0.0002);
    CHECK(mean(xi) < 0.02); // truth 0.004, generous band
}

TEST_CASE("impossible latent structure surfaces as an error") {
    // person 0's recovery is latent in (0,7] yet it must source an
    // infection at exactly t = 7: no recovery time can do both
    ProcessState g0(3);
    g0.set_status(0, DiseaseStatus::Infectious);
    g0.add_edge(0, 2);
    PartialData pd;
    pd.g0 = g0;
    pd.t_max = 7.0;
    pd.events = {Event::infection(7.0, 2)};
    StatusReport rep;
    rep.time = 7.0;
    rep.ill = {false, false, true};
    pd.reports = {rep};
    CHECK_THROWS_AS(
        gibbs_run(pd, PriorSet::defaults(), 10, 1, 1, ImputeMethod::Darci, 1),
        std::runtime_error);
}

TEST_CASE("timing harness shapes and sanity") {
    ImputationInterval iv;
    iv.u = 0.0;
    iv.v = 1.0;
    iv.q_set = {0, 1};
    iv.q_lower = {0.0, 0.0};
    InsideInfection ii;
    ii.person = 5;
    ii.time = 0.4;
    ii.known_sources = 0;
    ii.q_sources = {0, 1};
    iv.p_list.push_back(ii);

    const std::vector<TimingRow> table = timing_benchmark(
        {iv}, {ImputeMethod::Darci, ImputeMethod::Reject, ImputeMethod::Mh}, 1.0, 64, 12);
    REQUIRE(table.size() == 3);
    CHECK(table[0].method == "darci");
    CHECK(table[1].method == "reject");
    CHECK(table[2].method == "mh");
    for (const TimingRow& row : table) {
        CHECK(row.instance == 0);
        CHECK(row.r_count == 2);
        CHECK(row.min_us > 0.0);
        CHECK(row.min_us <= row.median_us);
    }
}

} // TEST_SUITE
