#include "epinet/core.hpp"

#include <algorithm>

namespace epinet {

void ProcessState::check_person(int p) const {
    if (p < 0 || p >= n())
        throw std::out_of_range("person id " + std::to_string(p) + " outside population");
}

bool ProcessState::connected(int a, int b) const {
    check_person(a);
    check_person(b);
    // scan the shorter neighbor list
    const auto& la = nbrs_[static_cast<std::size_t>(a)];
    const auto& lb = nbrs_[static_cast<std::size_t>(b)];
    const auto& shorter = la.size() <= lb.size() ? la : lb;
    const int other = la.size() <= lb.size() ? b : a;
    return std::find(shorter.begin(), shorter.end(), other) != shorter.end();
}

void ProcessState::add_edge(int a, int b) {
    if (a == b) throw IncompatibleEvent("self-loop on person " + std::to_string(a));
    if (connected(a, b))
        throw IncompatibleEvent("pair (" + std::to_string(a) + "," + std::to_string(b) +
                                ") already connected");
    nbrs_[static_cast<std::size_t>(a)].push_back(b);
    nbrs_[static_cast<std::size_t>(b)].push_back(a);
    ++edge_count_;
}

void ProcessState::remove_edge(int a, int b) {
    check_person(a);
    check_person(b);
    auto drop = [](std::vector<int>& list, int x) {
        auto it = std::find(list.begin(), list.end(), x);
        if (it == list.end()) return false;
        *it = list.back();
        list.pop_back();
        return true;
    };
    if (!drop(nbrs_[static_cast<std::size_t>(a)], b) ||
        !drop(nbrs_[static_cast<std::size_t>(b)], a))
        throw IncompatibleEvent("pair (" + std::to_string(a) + "," + std::to_string(b) +
                                ") not connected");
    --edge_count_;
}

std::vector<std::pair<int, int>> ProcessState::edges() const {
    std::vector<std::pair<int, int>> out;
    out.reserve(edge_count_);
    for (int p = 0; p < n(); ++p)
        for (int q : nbrs_[static_cast<std::size_t>(p)])
            if (p < q) out.emplace_back(p, q);
    return out;
}

int ProcessState::count(DiseaseStatus s) const {
    return static_cast<int>(std::count(status_.begin(), status_.end(), s));
}

StateCounts state_counts(const ProcessState& state) {
    StateCounts c;
    const int n = state.n();
    for (int p = 0; p < n; ++p) {
        switch (state.status(p)) {
            case DiseaseStatus::Susceptible: ++c.s; break;
            case DiseaseStatus::Infectious: ++c.i; break;
            case DiseaseStatus::Recovered: break;
        }
    }
    c.h = n - c.i;
    c.m_max = {c.h * (c.h - 1) / 2, c.h * c.i, c.i * (c.i - 1) / 2};
    for (const auto& [a, b] : state.edges()) {
        const DiseaseStatus sa = state.status(a), sb = state.status(b);
        ++c.m[pair_class(sa, sb)];
        const bool si_pair = (sa == DiseaseStatus::Susceptible && sb == DiseaseStatus::Infectious) ||
                             (sb == DiseaseStatus::Susceptible && sa == DiseaseStatus::Infectious);
        if (si_pair) ++c.si;
    }
    for (int k = 0; k < 3; ++k) c.m_d[static_cast<std::size_t>(k)] =
        c.m_max[static_cast<std::size_t>(k)] - c.m[static_cast<std::size_t>(k)];
    return c;
}

void apply_event_inplace(ProcessState& state, const Event& e, bool allow_external, bool sis) {
    if (e.time < state.time())
        throw IncompatibleEvent("event at t=" + std::to_string(e.time) +
                                " precedes state time t=" + std::to_string(state.time()));
    switch (e.kind) {
        case EventKind::Infection: {
            if (state.status(e.p1) != DiseaseStatus::Susceptible)
                throw IncompatibleEvent("infection of non-susceptible person " +
                                        std::to_string(e.p1));
            if (!allow_external) {
                bool has_source = false;
                for (int q : state.neighbors(e.p1))
                    if (state.status(q) == DiseaseStatus::Infectious) { has_source = true; break; }
                if (!has_source)
                    throw IncompatibleEvent("infection of person " + std::to_string(e.p1) +
                                            " with no infectious neighbor");
            }
            state.set_status(e.p1, DiseaseStatus::Infectious);
            break;
        }
        case EventKind::Recovery: {
            if (state.status(e.p1) != DiseaseStatus::Infectious)
                throw IncompatibleEvent("recovery of non-infectious person " +
                                        std::to_string(e.p1));
            state.set_status(e.p1, sis ? DiseaseStatus::Susceptible : DiseaseStatus::Recovered);
            break;
        }
        case EventKind::LinkOn:
            state.add_edge(e.p1, e.p2);
            break;
        case EventKind::LinkOff:
            state.remove_edge(e.p1, e.p2);
            break;
    }
    state.set_time(e.time);
}

ProcessState apply_event(const ProcessState& state, const Event& e,
                         bool allow_external, bool sis) {
    ProcessState next = state;
    apply_event_inplace(next, e, allow_external, sis);
    return next;
}

ValidationReport validate_trace(const ProcessState& g0, const EventTrace& events,
                                bool allow_external, bool sis) {
    ValidationReport report;
    ProcessState state = g0;
    double last_time = g0.time();
    for (std::size_t j = 0; j < events.size(); ++j) {
        const Event& e = events[j];
        if (e.time <= last_time) {
            report.ok = false;
            report.bad_index = j;
            report.message = "event time " + std::to_string(e.time) +
                             " does not increase past " + std::to_string(last_time);
            return report;
        }
        try {
            apply_event_inplace(state, e, allow_external, sis);
        } catch (const std::exception& ex) {
            report.ok = false;
            report.bad_index = j;
            report.message = ex.what();
            return report;
        }
        last_time = e.time;
    }
    return report;
}

} // namespace epinet
