/******************************************************************/
// simulator.cpp
/******************************************************************/
#include "epinet/simulator.hpp"

#include <algorithm>
#include <cmath>

namespace epinet {

double total_rate(const StateCounts& counts, const ModelParams& params) {
    double rate = params.beta * static_cast<double>(counts.si)
                + params.gamma * static_cast<double>(counts.i);
    for (int k = 0; k < 3; ++k) {
        rate += params.alpha[k] * static_cast<double>(counts.m_max[k] - counts.m[k]);
        rate += params.omega[k] * static_cast<double>(counts.m[k]);
    }
    if (params.open()) rate += *params.xi * static_cast<double>(counts.s);
    return rate;
}

namespace {

// Uniform member of the set of persons with the given predicate.
template <typename Pred>
int pick_person(const ProcessState& state, long count, Pred pred, Rng& rng) {
    long idx = static_cast<long>(rng.uniform_int(static_cast<std::uint32_t>(count)));
    for (int p = 0; p < state.n(); ++p) {
        if (!pred(state.status(p))) continue;
        if (idx == 0) return p;
        --idx;
    }
    return -1; // unreachable when count is correct
}

// Uniform S-I link; returns the susceptible endpoint.
int pick_si_edge(const ProcessState& state, long si, Rng& rng) {
    long idx = static_cast<long>(rng.uniform_int(static_cast<std::uint32_t>(si)));
    for (int p = 0; p < state.n(); ++p) {
        if (state.status(p) != DiseaseStatus::Infectious) continue;
        for (int q : state.neighbors(p)) {
            if (state.status(q) != DiseaseStatus::Susceptible) continue;
            if (idx == 0) return q;
            --idx;
        }
    }
    return -1;
}

// Uniform connected pair of the given class.
std::pair<int, int> pick_edge_of_class(const ProcessState& state, LinkClass cls, long count,
                                       Rng& rng) {
    long idx = static_cast<long>(rng.uniform_int(static_cast<std::uint32_t>(count)));
    for (int p = 0; p < state.n(); ++p) {
        for (int q : state.neighbors(p)) {
            if (q <= p) continue;
            if (pair_class(state.status(p), state.status(q)) != cls) continue;
            if (idx == 0) return {p, q};
            --idx;
        }
    }
    return {-1, -1};
}

// Uniform disconnected pair of the given class. Rejection from the
// status pools is cheap on sparse networks; fall back to exhaustive
// enumeration if the class is nearly complete.
std::pair<int, int> pick_nonedge_of_class(const ProcessState& state, LinkClass cls, Rng& rng) {
    std::vector<int> healthy_pool, inf_pool;
    for (int p = 0; p < state.n(); ++p) {
        (healthy(state.status(p)) ? healthy_pool : inf_pool).push_back(p);
    }
    const std::vector<int>& a_pool = (cls == LinkClass::II) ? inf_pool : healthy_pool;
    const std::vector<int>& b_pool = (cls == LinkClass::HH) ? healthy_pool : inf_pool;
    for (int attempt = 0; attempt < 10000; ++attempt) {
        int a = a_pool[rng.uniform_int(static_cast<std::uint32_t>(a_pool.size()))];
        int b = b_pool[rng.uniform_int(static_cast<std::uint32_t>(b_pool.size()))];
        if (a == b || state.connected(a, b)) continue;
        return {std::min(a, b), std::max(a, b)};
    }
    std::vector<std::pair<int, int>> pool;
    for (int a : a_pool) {
        for (int b : b_pool) {
            if (b <= a && cls != LinkClass::HI) continue; // unordered within one pool
            if (a == b || state.connected(a, b)) continue;
            pool.emplace_back(std::min(a, b), std::max(a, b));
        }
    }
    if (cls == LinkClass::HI) {
        std::sort(pool.begin(), pool.end());
        pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
    }
    auto pick = pool[rng.uniform_int(static_cast<std::uint32_t>(pool.size()))];
    return pick;
}

struct Drawn {
    double dt;
    Event event;
    int cls; // 0 infection, 1 recovery, 2 activation, 3 termination, 4 external
};

Drawn draw_event(const ProcessState& state, const ModelParams& params, Rng& rng) {
    const StateCounts counts = state_counts(state);
    // Class weights, in fixed order: infection, recovery, activation,
    // termination, external infection.
    std::array<double, 5> w{};
    w[0] = params.beta * static_cast<double>(counts.si);
    w[1] = params.gamma * static_cast<double>(counts.i);
    std::array<double, 3> act{}, term{};
    for (int k = 0; k < 3; ++k) {
        act[k] = params.alpha[k] * static_cast<double>(counts.m_max[k] - counts.m[k]);
        term[k] = params.omega[k] * static_cast<double>(counts.m[k]);
        w[2] += act[k];
        w[3] += term[k];
    }
    if (params.open()) w[4] = *params.xi * static_cast<double>(counts.s);

    const double total = w[0] + w[1] + w[2] + w[3] + w[4];
    if (total <= 0.0) throw Extinct();

    const double dt = rng.exponential(total);
    const double t = state.time() + dt;

    const int which = static_cast<int>(rng.pick_weighted(w.data(), 5, total));
    switch (which) {
    case 0: return {dt, Event::infection(t, pick_si_edge(state, counts.si, rng)), which};
    case 1:
        return {dt, Event::recovery(t, pick_person(
                        state, counts.i,
                        [](DiseaseStatus s) { return s == DiseaseStatus::Infectious; }, rng)),
                which};
    case 2: {
        auto cls = static_cast<LinkClass>(rng.pick_weighted(act.data(), 3, w[2]));
        auto [a, b] = pick_nonedge_of_class(state, cls, rng);
        return {dt, Event::link_on(t, a, b), which};
    }
    case 3: {
        auto cls = static_cast<LinkClass>(rng.pick_weighted(term.data(), 3, w[3]));
        auto [a, b] = pick_edge_of_class(state, cls, counts.m[static_cast<int>(cls)], rng);
        return {dt, Event::link_off(t, a, b), which};
    }
    default:
        return {dt, Event::infection(t, pick_person(
                        state, counts.s,
                        [](DiseaseStatus s) { return s == DiseaseStatus::Susceptible; }, rng)),
                which};
    }
}

} // namespace

std::pair<double, Event> next_event(const ProcessState& state, const ModelParams& params,
                                    Rng& rng) {
    Drawn d = draw_event(state, params, rng);
    return {d.dt, d.event};
}

SimResult simulate(const SimConfig& config) {
    Rng rng(config.seed);
    SimResult result;
    result.g0 = config.g0;

    if (config.seeds) {
        for (int p : *config.seeds) result.g0.set_status(p, DiseaseStatus::Infectious);
    } else if (result.g0.count(DiseaseStatus::Infectious) == 0 && config.i0 > 0) {
        // place i0 seeds uniformly at random, without replacement
        std::vector<int> order(static_cast<std::size_t>(result.g0.n()));
        for (int p = 0; p < result.g0.n(); ++p) order[static_cast<std::size_t>(p)] = p;
        for (int k = 0; k < config.i0 && k < result.g0.n(); ++k) {
            std::uint32_t j = k + rng.uniform_int(static_cast<std::uint32_t>(result.g0.n() - k));
            std::swap(order[static_cast<std::size_t>(k)], order[static_cast<std::size_t>(j)]);
            result.g0.set_status(order[static_cast<std::size_t>(k)], DiseaseStatus::Infectious);
        }
    }

    ProcessState state = result.g0;
    const bool open = config.params.open();
    while (true) {
        if (total_rate(state_counts(state), config.params) <= 0.0) break;
        Drawn d = draw_event(state, config.params, rng);
        if (d.event.time > config.t_max) break;
        if (open && d.event.kind == EventKind::Infection) {
            result.infection_internal.push_back(d.cls == 0 ? 1 : 0);
        }
        apply_event_inplace(state, d.event, open, config.sis);
        result.events.push_back(d.event);
    }
    return result;
}

PartialData synthesize_missingness(const ProcessState& g0, const EventTrace& events,
                                   double t_max, double eta, double report_period, Rng& rng,
                                   const std::vector<std::uint8_t>& infection_internal) {
    PartialData out;
    out.g0 = g0;
    out.t_max = t_max;
    out.infection_internal = infection_internal;

    // choose which recovery events to hide
    std::vector<std::size_t> rec_idx;
    for (std::size_t j = 0; j < events.size(); ++j) {
        if (events[j].kind == EventKind::Recovery) rec_idx.push_back(j);
    }
    const long hide = std::lround(eta * static_cast<double>(rec_idx.size()));
    for (long k = 0; k < hide; ++k) {
        std::uint32_t j = static_cast<std::uint32_t>(k)
                        + rng.uniform_int(static_cast<std::uint32_t>(rec_idx.size()) -
                                          static_cast<std::uint32_t>(k));
        std::swap(rec_idx[static_cast<std::size_t>(k)], rec_idx[j]);
    }
    std::vector<bool> hidden(events.size(), false);
    for (long k = 0; k < hide; ++k) {
        const Event& e = events[rec_idx[static_cast<std::size_t>(k)]];
        hidden[rec_idx[static_cast<std::size_t>(k)]] = true;
        out.hidden.emplace_back(e.p1, e.time);
    }
    std::sort(out.hidden.begin(), out.hidden.end(),
              [](const auto& a, const auto& b) { return a.second < b.second; });

    for (std::size_t j = 0; j < events.size(); ++j) {
        if (!hidden[j]) out.events.push_back(events[j]);
    }

    // periodic status reports, always closing with one at t_max
    std::vector<double> report_times;
    for (double t = report_period; t < t_max; t += report_period) report_times.push_back(t);
    report_times.push_back(t_max);

    ProcessState state = g0;
    std::size_t j = 0;
    const bool open = !infection_internal.empty();
    for (double t : report_times) {
        while (j < events.size() && events[j].time <= t) {
            apply_event_inplace(state, events[j], open);
            ++j;
        }
        StatusReport rep;
        rep.time = t;
        rep.ill.resize(static_cast<std::size_t>(state.n()));
        for (int p = 0; p < state.n(); ++p) {
            rep.ill[static_cast<std::size_t>(p)] =
                (state.status(p) == DiseaseStatus::Infectious);
        }
        out.reports.push_back(std::move(rep));
    }
    return out;
}

ProcessState erdos_renyi(int n, double p, Rng& rng) {
    ProcessState state(n);
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            if (rng.uniform() < p) state.add_edge(a, b);
        }
    }
    return state;
}

ProcessState hubnet(int n, double k, Rng& rng) {
    ProcessState state(n);
    const int base = static_cast<int>(std::floor(k));
    const double frac = k - std::floor(k);
    std::vector<double> weight(static_cast<std::size_t>(n), 0.0);
    for (int v = 1; v < n; ++v) {
        int m = base + ((frac > 0.0 && rng.uniform() < frac) ? 1 : 0);
        m = std::min(m, v);
        double total = 0.0;
        for (int u = 0; u < v; ++u) {
            weight[static_cast<std::size_t>(u)] = static_cast<double>(state.neighbors(u).size()) + 1.0;
            total += weight[static_cast<std::size_t>(u)];
        }
        for (int e = 0; e < m; ++e) {
            std::size_t u = rng.pick_weighted(weight.data(), static_cast<std::size_t>(v), total);
            state.add_edge(static_cast<int>(u), v);
            total -= weight[u];
            weight[u] = 0.0; // without replacement
        }
    }
    return state;
}

} // namespace epinet
