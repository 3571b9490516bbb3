/******************************************************************/
// mcmc.cpp
/******************************************************************/
#include "epinet/mcmc.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace epinet {

const char* impute_method_name(ImputeMethod m) {
    switch (m) {
    case ImputeMethod::Darci: return "darci";
    case ImputeMethod::Reject: return "reject";
    default: return "mh";
    }
}

ImputeMethod parse_impute_method(const std::string& name) {
    if (name == "darci") return ImputeMethod::Darci;
    if (name == "reject") return ImputeMethod::Reject;
    if (name == "mh") return ImputeMethod::Mh;
    throw std::invalid_argument("unknown imputation method: " + name);
}

std::vector<double> Chain::column(std::size_t j) const {
    std::vector<double> col;
    col.reserve(draws.size());
    for (const auto& row : draws) col.push_back(row[j]);
    return col;
}

Chain gibbs_run(const PartialData& partial, const PriorSet& priors, int iters, int burnin,
                int thin, ImputeMethod method, std::uint64_t seed) {
    return gibbs_run(std::vector<PartialData>{partial}, priors, iters, burnin, thin, method,
                     seed);
}

Chain gibbs_run(const std::vector<PartialData>& periods, const PriorSet& priors, int iters,
                int burnin, int thin, ImputeMethod method, std::uint64_t seed) {
    if (iters <= burnin) throw std::invalid_argument("iters must exceed burnin");

    struct PeriodCtx {
        const PartialData* data;
        std::vector<ImputationInterval> intervals;
        std::vector<Imputation> current; // persists across sweeps (mh)
    };
    std::vector<PeriodCtx> ctx;
    std::size_t n_intervals = 0;
    bool open = false;
    for (const PartialData& pd : periods) {
        PeriodCtx c;
        c.data = &pd;
        c.intervals = extract_intervals(pd);
        c.current.resize(c.intervals.size());
        n_intervals += c.intervals.size();
        open = open || pd.open();
        ctx.push_back(std::move(c));
    }

    Chain chain;
    chain.burnin = burnin;
    chain.thin = thin;
    chain.seed = seed;
    chain.method = impute_method_name(method);
    chain.names.assign(kParamNames.begin(), kParamNames.end());
    if (open) chain.names.emplace_back("xi");

    // stream layout: sweep s uses streams s*(L+1) .. s*(L+1)+L, the
    // first for the parameter draws, the rest one per interval; sweep
    // 0 is reserved for initialisation
    const std::uint64_t stride = static_cast<std::uint64_t>(n_intervals) + 1;
    double gamma_cur = priors.gamma.mean();

    {
        std::uint64_t k = 1;
        for (PeriodCtx& c : ctx) {
            for (std::size_t i = 0; i < c.intervals.size(); ++i, ++k) {
                Rng rng(seed, k);
                c.current[i] = darci(c.intervals[i], gamma_cur, rng);
            }
        }
    }

    auto augment = [&](const PeriodCtx& c) {
        std::vector<Event> recs;
        for (const Imputation& imp : c.current) {
            for (const auto& [person, time] : imp) recs.push_back(Event::recovery(time, person));
        }
        std::sort(recs.begin(), recs.end(),
                  [](const Event& a, const Event& b) { return a.time < b.time; });
        EventTrace merged;
        merged.reserve(c.data->events.size() + recs.size());
        std::merge(c.data->events.begin(), c.data->events.end(), recs.begin(), recs.end(),
                   std::back_inserter(merged),
                   [](const Event& a, const Event& b) { return a.time < b.time; });
        return merged;
    };

    for (int s = 1; s <= iters; ++s) {
        const std::uint64_t base = static_cast<std::uint64_t>(s) * stride;

        std::uint64_t k = 1;
        for (PeriodCtx& c : ctx) {
            for (std::size_t i = 0; i < c.intervals.size(); ++i, ++k) {
                Rng rng(seed, base + k);
                try {
                    switch (method) {
                    case ImputeMethod::Darci:
                        c.current[i] = darci(c.intervals[i], gamma_cur, rng);
                        break;
                    case ImputeMethod::Reject:
                        c.current[i] = reject_impute(c.intervals[i], gamma_cur, rng);
                        break;
                    case ImputeMethod::Mh:
                        c.current[i] = mh_impute(c.intervals[i], gamma_cur, c.current[i], rng);
                        break;
                    }
                } catch (const std::runtime_error& e) {
                    throw std::runtime_error("sweep " + std::to_string(s) + ": " + e.what());
                }
            }
        }

        bool first = true;
        SufficientStats stats;
        for (PeriodCtx& c : ctx) {
            SufficientStats st = sufficient_stats(c.data->g0, augment(c), c.data->t_max);
            if (c.data->open()) attach_labels(st, c.data->infection_internal);
            stats = first ? st : combine_stats(stats, st);
            first = false;
        }

        const PosteriorSet post = posterior_params(stats, priors);
        Rng rng(seed, base);
        std::vector<double> row;
        row.reserve(chain.names.size());
        row.push_back(rng.gamma(post.beta.shape, post.beta.rate));
        row.push_back(rng.gamma(post.gamma.shape, post.gamma.rate));
        for (const GammaDist& g : post.alpha) row.push_back(rng.gamma(g.shape, g.rate));
        for (const GammaDist& g : post.omega) row.push_back(rng.gamma(g.shape, g.rate));
        if (open) {
            if (!post.xi) throw std::runtime_error("open-mode run without a xi posterior");
            row.push_back(rng.gamma(post.xi->shape, post.xi->rate));
        }
        gamma_cur = row[1];

        if (s > burnin && (s - burnin) % thin == 0) chain.draws.push_back(std::move(row));
    }
    return chain;
}

namespace {

// autocovariance at the given lag, with the n denominator
double autocov(const std::vector<double>& v, double mu, std::size_t lag) {
    double s = 0.0;
    for (std::size_t i = 0; i + lag < v.size(); ++i) s += (v[i] - mu) * (v[i + lag] - mu);
    return s / static_cast<double>(v.size());
}

bool constant_series(const std::vector<double>& v) {
    for (double x : v) {
        if (x != v.front()) return false;
    }
    return true;
}

} // namespace

double ess(const std::vector<double>& series) {
    const std::size_t n = series.size();
    if (n < 10) throw DegenerateChain("need at least 10 draws");
    if (constant_series(series)) throw DegenerateChain("chain has zero variance");
    const double mu = mean(series);
    const double g0 = autocov(series, mu, 0);
    if (!(g0 > 0.0)) throw DegenerateChain("chain has zero variance");

    // pair consecutive autocorrelations and stop at the first
    // non-positive pair sum
    double acc = 0.0;
    for (std::size_t k = 1; k + 1 < n; k += 2) {
        const double pair = (autocov(series, mu, k) + autocov(series, mu, k + 1)) / g0;
        if (pair <= 0.0) break;
        acc += pair;
    }
    const double out = static_cast<double>(n) / (1.0 + 2.0 * acc);
    return std::clamp(out, 1.0, static_cast<double>(n));
}

GewekeResult geweke(const std::vector<double>& series, double first, double last) {
    const std::size_t n = series.size();
    if (n < 100) throw DegenerateChain("need at least 100 draws");
    if (constant_series(series)) throw DegenerateChain("chain has zero variance");

    const std::size_t na = static_cast<std::size_t>(first * static_cast<double>(n));
    const std::size_t nb = static_cast<std::size_t>(last * static_cast<double>(n));
    const std::vector<double> a(series.begin(), series.begin() + static_cast<long>(na));
    const std::vector<double> b(series.end() - static_cast<long>(nb), series.end());

    // spectral density at frequency zero with a Bartlett lag window
    auto spectral_var = [](const std::vector<double>& w) {
        const double mu = mean(w);
        const std::size_t cap = static_cast<std::size_t>(
            std::floor(std::sqrt(static_cast<double>(w.size()))));
        double s = autocov(w, mu, 0);
        for (std::size_t k = 1; k <= cap; ++k) {
            const double weight = 1.0 - static_cast<double>(k) / static_cast<double>(cap + 1);
            s += 2.0 * weight * autocov(w, mu, k);
        }
        return s / static_cast<double>(w.size());
    };

    const double va = spectral_var(a);
    const double vb = spectral_var(b);
    if (!(va + vb > 0.0)) throw DegenerateChain("window variance vanished");
    GewekeResult out;
    out.z = (mean(a) - mean(b)) / std::sqrt(va + vb);
    out.p = 2.0 * (1.0 - normal_cdf(std::fabs(out.z)));
    return out;
}

std::vector<TimingRow> timing_benchmark(const std::vector<ImputationInterval>& instances,
                                        const std::vector<ImputeMethod>& methods, double gamma,
                                        int reps, std::uint64_t seed) {
    std::vector<TimingRow> table;
    for (std::size_t i = 0; i < instances.size(); ++i) {
        const ImputationInterval& iv = instances[i];
        for (ImputeMethod m : methods) {
            Rng rng(seed, i);
            Imputation current = darci(iv, gamma, rng); // mh needs a valid state
            std::vector<double> micros;
            micros.reserve(static_cast<std::size_t>(reps));
            for (int r = 0; r < reps; ++r) {
                const auto t0 = std::chrono::steady_clock::now();
                switch (m) {
                case ImputeMethod::Darci: darci(iv, gamma, rng); break;
                case ImputeMethod::Reject: reject_impute(iv, gamma, rng); break;
                case ImputeMethod::Mh: current = mh_impute(iv, gamma, current, rng); break;
                }
                const auto t1 = std::chrono::steady_clock::now();
                micros.push_back(
                    std::chrono::duration<double, std::micro>(t1 - t0).count());
            }
            TimingRow row;
            row.instance = i;
            row.r_count = iv.r_count();
            row.method = impute_method_name(m);
            row.min_us = *std::min_element(micros.begin(), micros.end());
            row.median_us = median(micros);
            table.push_back(std::move(row));
        }
    }
    return table;
}

} // namespace epinet
