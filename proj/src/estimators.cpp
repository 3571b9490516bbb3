/******************************************************************/
// estimators.cpp
/******************************************************************/
#include "epinet/estimators.hpp"

#include <cmath>
#include <limits>

namespace epinet {

const std::array<const char*, 8> kParamNames = {
    "beta", "gamma", "alpha_ss", "alpha_si", "alpha_ii", "omega_ss", "omega_si", "omega_ii"};

double GammaDist::sd() const { return std::sqrt(shape) / rate; }

PriorSet PriorSet::defaults() {
    PriorSet p;
    p.beta = {1.0, 50.0};
    p.gamma = {1.0, 10.0};
    for (auto& a : p.alpha) a = {1.0, 250.0};
    for (auto& w : p.omega) w = {1.0, 1.0 / 0.06};
    p.xi = GammaDist{1.0, 250.0};
    return p;
}

namespace {

double point_estimate(long count, double exposure, const char* name,
                      std::vector<std::string>& flags) {
    if (exposure <= 0.0) {
        flags.emplace_back(name);
        return (count > 0) ? std::numeric_limits<double>::infinity() : 0.0;
    }
    return static_cast<double>(count) / exposure;
}

} // namespace

MleFit mle_closed(const SufficientStats& stats) {
    MleFit fit;
    fit.params.beta = point_estimate(stats.n_e, stats.exp_si, "beta", fit.nonidentifiable);
    fit.params.gamma = point_estimate(stats.n_r, stats.exp_i, "gamma", fit.nonidentifiable);
    for (std::size_t k = 0; k < 3; ++k) {
        fit.params.alpha[k] = point_estimate(stats.c[k], stats.exp_md[k], kParamNames[2 + k],
                                             fit.nonidentifiable);
        fit.params.omega[k] = point_estimate(stats.d[k], stats.exp_m[k], kParamNames[5 + k],
                                             fit.nonidentifiable);
    }
    return fit;
}

NetworkTreatmentFit mle_network_treatments(const ProcessState& g0, const EventTrace& events,
                                           double t_max) {
    NetworkTreatmentFit fit;
    const SufficientStats dyn = sufficient_stats(g0, events, t_max);
    fit.n_e = dyn.n_e;
    fit.dynamic_exposure = dyn.exp_si;

    // statuses evolve as observed, but the network is frozen at G(0)
    // (static) or complete (homogeneous mixing)
    std::vector<DiseaseStatus> status(static_cast<std::size_t>(g0.n()));
    long i_count = 0, s_count = 0;
    for (int p = 0; p < g0.n(); ++p) {
        status[static_cast<std::size_t>(p)] = g0.status(p);
        if (g0.status(p) == DiseaseStatus::Infectious) ++i_count;
        if (g0.status(p) == DiseaseStatus::Susceptible) ++s_count;
    }
    long si_static = 0;
    for (auto [a, b] : g0.edges()) {
        const auto sa = status[static_cast<std::size_t>(a)];
        const auto sb = status[static_cast<std::size_t>(b)];
        if ((sa == DiseaseStatus::Susceptible && sb == DiseaseStatus::Infectious) ||
            (sb == DiseaseStatus::Susceptible && sa == DiseaseStatus::Infectious))
            ++si_static;
    }

    double t_prev = g0.time();
    for (const Event& e : events) {
        if (is_network(e.kind)) continue; // no effect on statuses
        const double dt = e.time - t_prev;
        fit.static_exposure += static_cast<double>(si_static) * dt;
        fit.mixing_exposure += static_cast<double>(s_count * i_count) * dt;
        t_prev = e.time;

        const int p = e.p1;
        const bool infecting = (e.kind == EventKind::Infection);
        for (int x : g0.neighbors(p)) {
            const auto sx = status[static_cast<std::size_t>(x)];
            if (infecting) {
                if (sx == DiseaseStatus::Susceptible) ++si_static;
                else if (sx == DiseaseStatus::Infectious) --si_static;
            } else {
                if (sx == DiseaseStatus::Susceptible) --si_static;
            }
        }
        if (infecting) {
            status[static_cast<std::size_t>(p)] = DiseaseStatus::Infectious;
            --s_count;
            ++i_count;
        } else {
            status[static_cast<std::size_t>(p)] = DiseaseStatus::Recovered;
            --i_count;
        }
    }
    const double dt = t_max - t_prev;
    fit.static_exposure += static_cast<double>(si_static) * dt;
    fit.mixing_exposure += static_cast<double>(s_count * i_count) * dt;

    auto ratio = [&](double expo) {
        return expo > 0.0 ? static_cast<double>(fit.n_e) / expo
                          : (fit.n_e > 0 ? std::numeric_limits<double>::infinity() : 0.0);
    };
    fit.dynamic_beta = ratio(fit.dynamic_exposure);
    fit.static_beta = ratio(fit.static_exposure);
    fit.mixing_beta = ratio(fit.mixing_exposure);
    return fit;
}

PosteriorSet posterior_params(const SufficientStats& stats, const PriorSet& priors) {
    PosteriorSet post;
    const bool open = (stats.n_e_int >= 0) && priors.xi.has_value();
    const long beta_count = open ? stats.n_e_int : stats.n_e;
    post.beta = {priors.beta.shape + static_cast<double>(beta_count),
                 priors.beta.rate + stats.exp_si};
    post.gamma = {priors.gamma.shape + static_cast<double>(stats.n_r),
                  priors.gamma.rate + stats.exp_i};
    for (std::size_t k = 0; k < 3; ++k) {
        post.alpha[k] = {priors.alpha[k].shape + static_cast<double>(stats.c[k]),
                         priors.alpha[k].rate + stats.exp_md[k]};
        post.omega[k] = {priors.omega[k].shape + static_cast<double>(stats.d[k]),
                         priors.omega[k].rate + stats.exp_m[k]};
    }
    if (open) {
        post.xi = GammaDist{priors.xi->shape + static_cast<double>(stats.n_e_ext),
                            priors.xi->rate + stats.exp_s};
    }
    return post;
}

OpenFit mle_open_labeled(const SufficientStats& stats) {
    if (stats.n_e_int < 0) throw NumericError("labelled fit requires per-infection labels");
    OpenFit fit;
    fit.beta = (stats.exp_si > 0.0) ? static_cast<double>(stats.n_e_int) / stats.exp_si : 0.0;
    fit.xi = (stats.exp_s > 0.0) ? static_cast<double>(stats.n_e_ext) / stats.exp_s : 0.0;
    if (fit.beta > 0.0) fit.kappa = fit.xi / fit.beta;
    else fit.kappa = (fit.xi > 0.0) ? std::numeric_limits<double>::infinity() : 0.0;
    return fit;
}

OpenFit mle_open_numeric(const SufficientStats& stats) {
    OpenFit fit;
    if (stats.n_e == 0) return fit; // no infections: all rates zero

    const long double n_e = static_cast<long double>(stats.n_e);
    const long double e_si = static_cast<long double>(stats.exp_si);
    const long double e_s = static_cast<long double>(stats.exp_s);

    // profile score in kappa after maximising over beta:
    //   h(kappa) = sum_p 1/(I_p + kappa) - beta_hat(kappa) * exp_s
    auto beta_hat = [&](long double kappa) { return n_e / (e_si + kappa * e_s); };
    auto score = [&](long double kappa) {
        long double s = 0.0L;
        for (long nbrs : stats.inf_nbr) s += 1.0L / (static_cast<long double>(nbrs) + kappa);
        return s - beta_hat(kappa) * e_s;
    };

    const bool orphan = stats.orphan_infection; // some I_p = 0: score diverges at 0+
    if (!orphan && score(0.0L) <= 0.0L) {
        // boundary solution: the closed model already explains the data
        fit.beta = static_cast<double>(beta_hat(0.0L));
        return fit;
    }

    long double lo = 0.0L, hi = 1.0L;
    while (score(hi) > 0.0L) {
        hi *= 2.0L;
        if (hi > 1e12L) throw NoRoot("profile score has no sign change up to kappa = 1e12");
    }
    long double mid = hi;
    for (int i = 0; i < 500; ++i) {
        mid = 0.5L * (lo + hi);
        const long double h = score(mid);
        if (std::fabs(h) < 1e-12L) break;
        (h > 0.0L ? lo : hi) = mid;
    }
    fit.kappa = static_cast<double>(mid);
    fit.beta = static_cast<double>(beta_hat(mid));
    fit.xi = fit.kappa * fit.beta;
    return fit;
}

Interval rate_confidence_interval(long count, double exposure, double level) {
    if (exposure <= 0.0) throw NumericError("confidence interval requires positive exposure");
    const double tail = (1.0 - level) / 2.0;
    Interval ci;
    ci.lo = (count == 0)
                ? 0.0
                : gamma_quantile_standard(static_cast<double>(count), tail) / exposure;
    ci.hi = gamma_quantile_standard(static_cast<double>(count) + 1.0, 1.0 - tail) / exposure;
    return ci;
}

} // namespace epinet
