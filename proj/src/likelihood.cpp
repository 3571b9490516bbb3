/******************************************************************/
// likelihood.cpp
/******************************************************************/
#include "epinet/likelihood.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace epinet {

namespace {

// count * log(rate) with the 0 * log(0) = 0 convention
double xlogy(long count, double rate) {
    if (count == 0) return 0.0;
    if (rate <= 0.0) return -std::numeric_limits<double>::infinity();
    return static_cast<double>(count) * std::log(rate);
}

[[noreturn]] void bad_event(std::size_t index, const std::string& what) {
    throw InvalidTrace("event " + std::to_string(index) + ": " + what);
}

} // namespace

SufficientStats sufficient_stats(const ProcessState& g0, const EventTrace& events,
                                 double t_max, Variant variant) {
    SufficientStats st;
    st.t_max = t_max;

    ProcessState state = g0;
    StateCounts cnt = state_counts(state);
    double t_prev = g0.time();

    auto integrate = [&](double until) {
        const double dt = until - t_prev;
        st.exp_si += static_cast<double>(cnt.si) * dt;
        st.exp_i += static_cast<double>(cnt.i) * dt;
        st.exp_s += static_cast<double>(cnt.s) * dt;
        for (int k = 0; k < 3; ++k) {
            st.exp_md[static_cast<std::size_t>(k)] +=
                static_cast<double>(cnt.m_max[static_cast<std::size_t>(k)] -
                                    cnt.m[static_cast<std::size_t>(k)]) * dt;
            st.exp_m[static_cast<std::size_t>(k)] +=
                static_cast<double>(cnt.m[static_cast<std::size_t>(k)]) * dt;
        }
    };

    for (std::size_t j = 0; j < events.size(); ++j) {
        const Event& e = events[j];
        if (e.time <= t_prev) bad_event(j, "times must be strictly increasing");
        if (e.time > t_max) bad_event(j, "event beyond the observation window");
        integrate(e.time);
        t_prev = e.time;

        switch (e.kind) {
        case EventKind::Infection: {
            const int p = e.p1;
            if (state.status(p) != DiseaseStatus::Susceptible)
                bad_event(j, "infection of a non-susceptible person");
            long nbrs = 0;
            for (int x : state.neighbors(p)) {
                if (state.status(x) == DiseaseStatus::Infectious) ++nbrs;
            }
            st.inf_nbr.push_back(nbrs);
            if (nbrs > 0) st.log_nbr += std::log(static_cast<double>(nbrs));
            else st.orphan_infection = true;
            ++st.n_e;
            // reclassify p's links and update the aggregate counts
            for (int x : state.neighbors(p)) {
                const DiseaseStatus sx = state.status(x);
                if (sx == DiseaseStatus::Susceptible) ++cnt.si;
                else if (sx == DiseaseStatus::Infectious) --cnt.si;
                const int old_cls = (sx == DiseaseStatus::Infectious) ? 1 : 0;
                --cnt.m[static_cast<std::size_t>(old_cls)];
                ++cnt.m[static_cast<std::size_t>(old_cls + 1)];
            }
            --cnt.s;
            ++cnt.i;
            --cnt.h;
            state.set_status(p, DiseaseStatus::Infectious);
            break;
        }
        case EventKind::Recovery: {
            const int p = e.p1;
            if (state.status(p) != DiseaseStatus::Infectious)
                bad_event(j, "recovery of a non-infectious person");
            ++st.n_r;
            const bool sis = (variant == Variant::SIS);
            for (int x : state.neighbors(p)) {
                const DiseaseStatus sx = state.status(x);
                if (sx == DiseaseStatus::Susceptible) --cnt.si;
                else if (sx == DiseaseStatus::Infectious && sis) ++cnt.si;
                const int old_cls = (sx == DiseaseStatus::Infectious) ? 2 : 1;
                --cnt.m[static_cast<std::size_t>(old_cls)];
                ++cnt.m[static_cast<std::size_t>(old_cls - 1)];
            }
            ++cnt.h;
            --cnt.i;
            if (sis) ++cnt.s;
            state.set_status(p, sis ? DiseaseStatus::Susceptible : DiseaseStatus::Recovered);
            break;
        }
        case EventKind::LinkOn: {
            const LinkClass cls = pair_class(state.status(e.p1), state.status(e.p2));
            const std::size_t k = static_cast<std::size_t>(cls);
            const long disconnected = cnt.m_max[k] - cnt.m[k];
            if (disconnected > 0) st.log_mclass += std::log(static_cast<double>(disconnected));
            ++st.c[k];
            try {
                state.add_edge(e.p1, e.p2);
            } catch (const IncompatibleEvent& ex) {
                bad_event(j, ex.what());
            }
            ++cnt.m[k];
            if (cls == LinkClass::HI &&
                (state.status(e.p1) == DiseaseStatus::Susceptible ||
                 state.status(e.p2) == DiseaseStatus::Susceptible))
                ++cnt.si;
            break;
        }
        case EventKind::LinkOff: {
            const LinkClass cls = pair_class(state.status(e.p1), state.status(e.p2));
            const std::size_t k = static_cast<std::size_t>(cls);
            if (cnt.m[k] > 0) st.log_mclass += std::log(static_cast<double>(cnt.m[k]));
            ++st.d[k];
            try {
                state.remove_edge(e.p1, e.p2);
            } catch (const IncompatibleEvent& ex) {
                bad_event(j, ex.what());
            }
            --cnt.m[k];
            if (cls == LinkClass::HI &&
                (state.status(e.p1) == DiseaseStatus::Susceptible ||
                 state.status(e.p2) == DiseaseStatus::Susceptible))
                --cnt.si;
            break;
        }
        }
        // recovery and infection change h and i, so refresh the pair caps
        cnt.m_max[0] = cnt.h * (cnt.h - 1) / 2;
        cnt.m_max[1] = cnt.h * cnt.i;
        cnt.m_max[2] = cnt.i * (cnt.i - 1) / 2;
    }

    if (t_max < t_prev) throw InvalidTrace("t_max precedes the last event");
    integrate(t_max);
    return st;
}

void attach_labels(SufficientStats& stats, const std::vector<std::uint8_t>& internal) {
    if (internal.size() != stats.inf_nbr.size())
        throw InvalidTrace("label count does not match infection events");
    stats.inf_internal = internal;
    stats.n_e_int = 0;
    stats.n_e_ext = 0;
    for (std::uint8_t flag : internal) (flag ? stats.n_e_int : stats.n_e_ext) += 1;
}

SufficientStats combine_stats(const SufficientStats& a, const SufficientStats& b) {
    SufficientStats s = a;
    s.t_max += b.t_max;
    s.n_e += b.n_e;
    s.n_r += b.n_r;
    if (a.n_e_int >= 0 && b.n_e_int >= 0) {
        s.n_e_int = a.n_e_int + b.n_e_int;
        s.n_e_ext = a.n_e_ext + b.n_e_ext;
    } else {
        s.n_e_int = s.n_e_ext = -1;
    }
    for (std::size_t k = 0; k < 3; ++k) {
        s.c[k] += b.c[k];
        s.d[k] += b.d[k];
        s.exp_md[k] += b.exp_md[k];
        s.exp_m[k] += b.exp_m[k];
    }
    s.exp_si += b.exp_si;
    s.exp_i += b.exp_i;
    s.exp_s += b.exp_s;
    s.log_nbr += b.log_nbr;
    s.log_mclass += b.log_mclass;
    s.orphan_infection = a.orphan_infection || b.orphan_infection;
    s.inf_nbr.insert(s.inf_nbr.end(), b.inf_nbr.begin(), b.inf_nbr.end());
    s.inf_internal.insert(s.inf_internal.end(), b.inf_internal.begin(), b.inf_internal.end());
    return s;
}

double loglik_sir(const SufficientStats& stats, const ModelParams& params,
                  bool include_class_term) {
    if (stats.orphan_infection) return -std::numeric_limits<double>::infinity();
    double ll = xlogy(stats.n_e, params.beta) + xlogy(stats.n_r, params.gamma)
              + stats.log_nbr + (include_class_term ? stats.log_mclass : 0.0)
              - params.beta * stats.exp_si - params.gamma * stats.exp_i;
    for (std::size_t k = 0; k < 3; ++k) {
        ll += xlogy(stats.c[k], params.alpha[k]) - params.alpha[k] * stats.exp_md[k];
        ll += xlogy(stats.d[k], params.omega[k]) - params.omega[k] * stats.exp_m[k];
    }
    return ll;
}

double loglik_sis(const SufficientStats& stats, const ModelParams& params,
                  bool include_class_term) {
    return loglik_sir(stats, params, include_class_term);
}

double loglik_open(const SufficientStats& stats, const ModelParams& params,
                   bool include_class_term) {
    if (!params.open()) throw InvalidTrace("open-model evaluation requires xi");
    const double xi = *params.xi;
    double ll = xlogy(stats.n_r, params.gamma)
              + (include_class_term ? stats.log_mclass : 0.0)
              - params.beta * stats.exp_si - xi * stats.exp_s - params.gamma * stats.exp_i;
    for (std::size_t k = 0; k < 3; ++k) {
        ll += xlogy(stats.c[k], params.alpha[k]) - params.alpha[k] * stats.exp_md[k];
        ll += xlogy(stats.d[k], params.omega[k]) - params.omega[k] * stats.exp_m[k];
    }
    for (long nbrs : stats.inf_nbr) {
        const double hazard = params.beta * static_cast<double>(nbrs) + xi;
        if (hazard <= 0.0) return -std::numeric_limits<double>::infinity();
        ll += std::log(hazard);
    }
    return ll;
}

long double loglik_open_bk(const SufficientStats& stats, long double beta, long double kappa) {
    long double ll = 0.0L;
    if (stats.n_e > 0) {
        if (beta <= 0.0L) return -std::numeric_limits<long double>::infinity();
        ll += static_cast<long double>(stats.n_e) * std::log(beta);
    }
    for (long nbrs : stats.inf_nbr) {
        const long double term = static_cast<long double>(nbrs) + kappa;
        if (term <= 0.0L) return -std::numeric_limits<long double>::infinity();
        ll += std::log(term);
    }
    ll -= beta * (static_cast<long double>(stats.exp_si) +
                  kappa * static_cast<long double>(stats.exp_s));
    return ll;
}

} // namespace epinet
