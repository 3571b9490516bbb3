/******************************************************************/
// ingest.cpp
/******************************************************************/
#include "epinet/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

namespace epinet {

std::vector<ContactPing> filter_pings(std::vector<ContactPing> pings, int rssi_min) {
    std::erase_if(pings, [&](const ContactPing& p) { return p.rssi <= rssi_min; });
    return pings;
}

EventTrace merge_contacts(std::vector<ContactPing> pings, Rng& rng, double gap,
                          double jitter_lo, double jitter_hi) {
    for (ContactPing& p : pings) {
        if (p.p1 > p.p2) std::swap(p.p1, p.p2);
    }
    std::sort(pings.begin(), pings.end(), [](const ContactPing& a, const ContactPing& b) {
        if (a.p1 != b.p1) return a.p1 < b.p1;
        if (a.p2 != b.p2) return a.p2 < b.p2;
        return a.time < b.time;
    });

    EventTrace events;
    std::size_t i = 0;
    while (i < pings.size()) {
        // one pair's run of pings
        std::size_t j = i;
        while (j < pings.size() && pings[j].p1 == pings[i].p1 && pings[j].p2 == pings[i].p2)
            ++j;
        // split the run into contacts at gaps, then jitter the ends
        std::vector<std::pair<double, double>> contacts;
        double start = pings[i].time, last = pings[i].time;
        for (std::size_t k = i + 1; k < j; ++k) {
            if (pings[k].time - last > gap) {
                contacts.emplace_back(start, last);
                start = pings[k].time;
            }
            last = pings[k].time;
        }
        contacts.emplace_back(start, last);
        for (std::size_t k = 0; k < contacts.size(); ++k) {
            double off = contacts[k].second + rng.uniform(jitter_lo, jitter_hi);
            if (k + 1 < contacts.size() && off >= contacts[k + 1].first)
                off = contacts[k + 1].first - 1e-9; // keep on/off alternating per pair
            events.push_back(Event::link_on(contacts[k].first, pings[i].p1, pings[i].p2));
            events.push_back(Event::link_off(off, pings[i].p1, pings[i].p2));
        }
        i = j;
    }
    std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
        if (a.time != b.time) return a.time < b.time;
        if (a.kind != b.kind) return a.kind < b.kind;
        if (a.p1 != b.p1) return a.p1 < b.p1;
        return a.p2 < b.p2;
    });
    return events;
}

IliResult ili_cases(const std::vector<SurveyRow>& surveys, int n, double t_max, Rng& rng,
                    double delay_max) {
    const int weeks = static_cast<int>(std::ceil(t_max / 7.0));
    auto report_time = [&](int w) { return std::min(7.0 * w, t_max); };

    // per-person weekly ILI indicator and onset dates
    std::map<int, std::vector<bool>> ill;
    std::map<int, std::vector<std::optional<double>>> onset;
    for (const SurveyRow& row : surveys) {
        if (row.week < 1 || row.week > weeks) continue;
        auto& iv = ill[row.person];
        auto& ov = onset[row.person];
        iv.resize(static_cast<std::size_t>(weeks), false);
        ov.resize(static_cast<std::size_t>(weeks));
        const bool case_week =
            row.cough && (row.fever || row.chills || row.aches) && row.felt_ill;
        const std::size_t w = static_cast<std::size_t>(row.week - 1);
        iv[w] = iv[w] || case_week;
        if (row.onset) ov[w] = row.onset;
    }

    IliResult out;
    for (auto& [person, weeks_ill] : ill) {
        // bridge single healthy weeks inside an episode
        for (std::size_t w = 1; w + 1 < weeks_ill.size(); ++w) {
            if (!weeks_ill[w] && weeks_ill[w - 1] && weeks_ill[w + 1]) weeks_ill[w] = true;
        }
        bool seen = false;
        std::size_t w = 0;
        while (w < weeks_ill.size()) {
            if (!weeks_ill[w]) {
                ++w;
                continue;
            }
            std::size_t end = w;
            while (end + 1 < weeks_ill.size() && weeks_ill[end + 1]) ++end;
            if (seen) {
                ++out.dropped_repeats;
            } else {
                seen = true;
                const auto& ov = onset[person];
                std::optional<double> day;
                for (std::size_t k = w; k <= end && !day; ++k) day = ov[k];
                if (!day)
                    throw MissingOnset("person " + std::to_string(person) +
                                       " has an episode with no onset date");
                IllnessEpisode ep;
                ep.person = person;
                ep.onset = *day;
                ep.infection = *day - rng.uniform(0.0, delay_max);
                ep.end_report = (end + 1 < weeks_ill.size())
                                    ? report_time(static_cast<int>(end) + 2)
                                    : std::numeric_limits<double>::infinity();
                if (ep.infection <= 0.0) out.initially_ill.push_back(person);
                out.episodes.push_back(ep);
            }
            w = end + 1;
        }
    }
    std::sort(out.episodes.begin(), out.episodes.end(),
              [](const IllnessEpisode& a, const IllnessEpisode& b) {
                  return a.infection < b.infection;
              });

    // reports from the infection-to-recovery-window spans
    for (int w = 1; w <= weeks; ++w) {
        StatusReport rep;
        rep.time = report_time(w);
        rep.ill.assign(static_cast<std::size_t>(n), false);
        for (const IllnessEpisode& ep : out.episodes) {
            if (ep.infection <= rep.time && rep.time < ep.end_report)
                rep.ill[static_cast<std::size_t>(ep.person)] = true;
        }
        out.reports.push_back(std::move(rep));
    }
    return out;
}

std::vector<std::uint8_t> label_infections(const EventTrace& network_events,
                                           const std::vector<IllnessEpisode>& episodes,
                                           double t_max, double window) {
    // per-pair contact intervals from the on/off trace
    std::map<std::pair<int, int>, std::vector<std::pair<double, double>>> contacts;
    std::map<std::pair<int, int>, double> open_at;
    for (const Event& e : network_events) {
        if (e.kind == EventKind::LinkOn) {
            open_at[{e.p1, e.p2}] = e.time;
        } else if (e.kind == EventKind::LinkOff) {
            auto it = open_at.find({e.p1, e.p2});
            if (it != open_at.end()) {
                contacts[{e.p1, e.p2}].emplace_back(it->second, e.time);
                open_at.erase(it);
            }
        }
    }
    for (const auto& [pair, since] : open_at) contacts[pair].emplace_back(since, t_max);

    std::vector<std::uint8_t> labels;
    for (const IllnessEpisode& ep : episodes) {
        if (ep.infection <= 0.0) continue; // initially ill: no infection event
        const double w_lo = ep.onset - window, w_hi = ep.onset;
        bool internal = false;
        for (const IllnessEpisode& other : episodes) {
            if (internal) break;
            if (other.person == ep.person) continue;
            const double s_lo = std::max(other.infection, 0.0);
            const double s_hi = std::min(other.end_report, t_max);
            const auto key = std::make_pair(std::min(ep.person, other.person),
                                            std::max(ep.person, other.person));
            const auto it = contacts.find(key);
            if (it == contacts.end()) continue;
            for (const auto& [on, off] : it->second) {
                if (std::max({on, w_lo, s_lo}) < std::min({off, w_hi, s_hi})) {
                    internal = true;
                    break;
                }
            }
        }
        labels.push_back(internal ? 1 : 0);
    }
    return labels;
}

PartialData assemble_period(int n, const EventTrace& network_events, const IliResult& ili,
                            double t_max) {
    PartialData out;
    out.g0 = ProcessState(n);
    for (int p : ili.initially_ill) out.g0.set_status(p, DiseaseStatus::Infectious);
    out.t_max = t_max;
    out.reports = ili.reports;
    out.infection_internal = label_infections(network_events, ili.episodes, t_max);

    out.events = network_events;
    for (const IllnessEpisode& ep : ili.episodes) {
        if (ep.infection > 0.0) out.events.push_back(Event::infection(ep.infection, ep.person));
    }
    std::sort(out.events.begin(), out.events.end(), [](const Event& a, const Event& b) {
        if (a.time != b.time) return a.time < b.time;
        if (a.kind != b.kind) return a.kind < b.kind;
        if (a.p1 != b.p1) return a.p1 < b.p1;
        return a.p2 < b.p2;
    });
    // ping grids produce exact time ties across pairs; stagger them by
    // +1e-9 days so replay sees strictly increasing times
    for (std::size_t j = 1; j < out.events.size(); ++j) {
        if (out.events[j].time <= out.events[j - 1].time)
            out.events[j].time = out.events[j - 1].time + 1e-9;
    }
    // jittered terminations can spill past the period end; the link
    // simply stays on through the horizon
    std::erase_if(out.events, [&](const Event& e) { return e.time > t_max; });
    return out;
}

} // namespace epinet
