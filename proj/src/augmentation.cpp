/******************************************************************/
// augmentation.cpp
/******************************************************************/
#include "epinet/augmentation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace epinet {

namespace {

constexpr double kNever = std::numeric_limits<double>::infinity();

[[noreturn]] void inconsistent(int person, double lo, double hi, const std::string& what) {
    throw InconsistentReports("person " + std::to_string(person) + " in (" +
                              std::to_string(lo) + ", " + std::to_string(hi) + "]: " + what);
}

} // namespace

std::vector<ImputationInterval> extract_intervals(const PartialData& data) {
    const int n = data.g0.n();

    // per-person infection and known recovery times from the trace
    std::vector<double> inf_time(static_cast<std::size_t>(n), kNever);
    std::vector<double> rec_time(static_cast<std::size_t>(n), kNever);
    std::vector<std::size_t> inf_index(static_cast<std::size_t>(n), 0); // into infection order
    for (int p = 0; p < n; ++p) {
        if (data.g0.status(p) == DiseaseStatus::Infectious)
            inf_time[static_cast<std::size_t>(p)] = -kNever;
    }
    std::size_t n_inf = 0;
    double t_prev = data.g0.time();
    for (std::size_t j = 0; j < data.events.size(); ++j) {
        const Event& e = data.events[j];
        if (e.time <= t_prev) throw InvalidTrace("event times must be strictly increasing");
        t_prev = e.time;
        if (e.kind == EventKind::Infection) {
            if (inf_time[static_cast<std::size_t>(e.p1)] < e.time)
                inconsistent(e.p1, 0.0, e.time, "second infection of the same person");
            inf_time[static_cast<std::size_t>(e.p1)] = e.time;
            inf_index[static_cast<std::size_t>(e.p1)] = n_inf++;
        } else if (e.kind == EventKind::Recovery) {
            rec_time[static_cast<std::size_t>(e.p1)] = e.time;
        }
    }
    if (!data.infection_internal.empty() && data.infection_internal.size() != n_inf)
        throw InvalidTrace("label count does not match infection events");

    // report grid, with the initial state as a virtual report at time 0
    std::vector<double> rt;
    rt.push_back(data.g0.time());
    for (const StatusReport& r : data.reports) rt.push_back(r.time);
    auto ill_at = [&](std::size_t k, int p) -> bool {
        if (k == 0) return data.g0.status(p) == DiseaseStatus::Infectious;
        return data.reports[k - 1].ill[static_cast<std::size_t>(p)];
    };

    // windows: which persons beyond the known events recover in each
    std::vector<std::vector<int>> window_q(rt.size());   // index k = window (rt[k], rt[k+1]]
    std::vector<int> q_window(static_cast<std::size_t>(n), -1);
    for (std::size_t k = 0; k + 1 < rt.size(); ++k) {
        const double u = rt[k], v = rt[k + 1];
        for (int p = 0; p < n; ++p) {
            const std::size_t sp = static_cast<std::size_t>(p);
            const bool before = ill_at(k, p);
            const bool after = ill_at(k + 1, p);
            const bool infected_inside = (inf_time[sp] > u && inf_time[sp] <= v);
            const bool recovered_inside = (rec_time[sp] > u && rec_time[sp] <= v);
            if (after && recovered_inside)
                inconsistent(p, u, v, "recovery recorded but still reported ill");
            if (!before && after && !infected_inside)
                inconsistent(p, u, v, "reported ill without an infection event");
            if (before && infected_inside)
                inconsistent(p, u, v, "infection event while already reported ill");
            const bool was_ill_inside = before || infected_inside;
            if (was_ill_inside && !after && !recovered_inside) {
                window_q[k].push_back(p);
                q_window[sp] = static_cast<int>(k);
            }
        }
    }

    // effective recovery *bounds*: persons in a window recover by its end
    auto recovered_before = [&](int p, double t) -> bool {
        const std::size_t sp = static_cast<std::size_t>(p);
        if (rec_time[sp] < t) return true;
        const int w = q_window[sp];
        return w >= 0 && rt[static_cast<std::size_t>(w) + 1] <= t;
    };

    // replay the network to snapshot each infection's neighbourhood
    std::vector<std::vector<int>> inf_nbrs(n_inf);
    {
        ProcessState net(n);
        for (auto [a, b] : data.g0.edges()) net.add_edge(a, b);
        for (const Event& e : data.events) {
            if (e.kind == EventKind::LinkOn) net.add_edge(e.p1, e.p2);
            else if (e.kind == EventKind::LinkOff) net.remove_edge(e.p1, e.p2);
            else if (e.kind == EventKind::Infection)
                inf_nbrs[inf_index[static_cast<std::size_t>(e.p1)]] = net.neighbors(e.p1);
        }
    }

    std::vector<ImputationInterval> out;
    for (std::size_t k = 0; k + 1 < rt.size(); ++k) {
        if (window_q[k].empty()) continue;
        ImputationInterval iv;
        iv.u = rt[k];
        iv.v = rt[k + 1];
        iv.q_set = window_q[k];
        for (int q : iv.q_set) {
            const double it = inf_time[static_cast<std::size_t>(q)];
            iv.q_lower.push_back(it > iv.u ? it : iv.u);
        }

        // state at u: network replayed to u, statuses from the data
        iv.z_u = ProcessState(n, iv.u);
        {
            ProcessState net(n);
            for (auto [a, b] : data.g0.edges()) net.add_edge(a, b);
            for (const Event& e : data.events) {
                if (e.time > iv.u) break;
                if (e.kind == EventKind::LinkOn) net.add_edge(e.p1, e.p2);
                else if (e.kind == EventKind::LinkOff) net.remove_edge(e.p1, e.p2);
            }
            for (auto [a, b] : net.edges()) iv.z_u.add_edge(a, b);
        }
        for (int p = 0; p < n; ++p) {
            const std::size_t sp = static_cast<std::size_t>(p);
            if (inf_time[sp] <= iv.u) {
                iv.z_u.set_status(p, recovered_before(p, iv.u) ? DiseaseStatus::Recovered
                                                               : DiseaseStatus::Infectious);
            }
        }

        // infections inside, ascending (the trace is time-sorted)
        for (const Event& e : data.events) {
            if (e.kind != EventKind::Infection) continue;
            if (e.time <= iv.u || e.time > iv.v) continue;
            InsideInfection ii;
            ii.person = e.p1;
            ii.time = e.time;
            const std::size_t gi = inf_index[static_cast<std::size_t>(e.p1)];
            if (!data.infection_internal.empty()) ii.internal = data.infection_internal[gi] != 0;
            for (int x : inf_nbrs[gi]) {
                const std::size_t sx = static_cast<std::size_t>(x);
                if (!(inf_time[sx] < ii.time)) continue;     // not infected yet
                if (q_window[sx] == static_cast<int>(k)) {
                    ii.q_sources.push_back(x);               // latent, this interval
                } else if (!recovered_before(x, ii.time)) {
                    ++ii.known_sources;                      // certainly still infectious
                }
            }
            // With external exposure present, an infection with no candidate
            // infector on the contact network is attributed to the outside
            // rather than rejected as inconsistent.
            if (ii.internal && data.open() && ii.known_sources == 0 && ii.q_sources.empty())
                ii.internal = false;
            iv.p_list.push_back(std::move(ii));
        }
        out.push_back(std::move(iv));
    }
    return out;
}

double sample_texp(double rate, double s, double t, Rng& rng) {
    if (!(s < t)) throw DegenerateInterval("truncated exponential needs s < t");
    const double span = t - s;
    const double w = std::expm1(-rate * span); // negative
    const double u = rng.uniform_pos();
    return s - std::log1p(u * w) / rate;
}

Imputation darci(const ImputationInterval& iv, double gamma, Rng& rng) {
    std::map<int, double> lb;
    for (std::size_t i = 0; i < iv.q_set.size(); ++i) lb[iv.q_set[i]] = iv.q_lower[i];

    for (const InsideInfection& ii : iv.p_list) {
        if (!ii.internal) continue; // externally infected: no source needed
        if (ii.known_sources > 0) continue;
        if (ii.q_sources.empty())
            throw NoPossibleInfector("infection of person " + std::to_string(ii.person) +
                                     " at t=" + std::to_string(ii.time) +
                                     " has no possible source");
        const int q = ii.q_sources[rng.uniform_int(
            static_cast<std::uint32_t>(ii.q_sources.size()))];
        lb[q] = std::max(lb[q], ii.time);
    }

    Imputation r;
    for (int q : iv.q_set) r[q] = sample_texp(gamma, lb[q], iv.v, rng);
    return r;
}

Imputation reject_impute(const ImputationInterval& iv, double gamma, Rng& rng,
                         long max_attempts) {
    for (long attempt = 0; attempt < max_attempts; ++attempt) {
        Imputation r;
        for (int q : iv.q_set) r[q] = sample_texp(gamma, iv.u, iv.v, rng);
        if (compatible(iv, r)) return r;
    }
    throw MaxAttemptsExceeded("no compatible draw in " + std::to_string(max_attempts) +
                              " attempts");
}

Imputation mh_impute(const ImputationInterval& iv, double gamma, const Imputation& current,
                     Rng& rng) {
    Imputation proposal;
    for (int q : iv.q_set) proposal[q] = sample_texp(gamma, iv.u, iv.v, rng);
    return compatible(iv, proposal) ? proposal : current;
}

bool compatible(const ImputationInterval& iv, const Imputation& r) {
    for (std::size_t i = 0; i < iv.q_set.size(); ++i) {
        const auto it = r.find(iv.q_set[i]);
        if (it == r.end()) return false;
        if (!(it->second > iv.q_lower[i] && it->second <= iv.v)) return false;
    }
    for (const InsideInfection& ii : iv.p_list) {
        if (!ii.internal || ii.known_sources > 0) continue;
        bool sourced = false;
        for (int q : ii.q_sources) {
            if (r.at(q) > ii.time) {
                sourced = true;
                break;
            }
        }
        if (!sourced) return false;
    }
    return true;
}

} // namespace epinet
