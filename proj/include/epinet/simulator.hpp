/******************************************************************/
// simulator.hpp
//
// Exact forward sampling of the coupled epidemic-network process.
// The chain is simulated event by event: the waiting time to the
// next event is exponential with the total instantaneous rate, the
// event class is drawn multinomially from the class rates, and the
// target (person, S-I link, or pair) is drawn uniformly within the
// class. Link classes are weighted by rate x count (entrywise), then
// a uniform pair of the winning class is selected.
//
// Open-population mode adds a fifth competing class: external
// infection at rate xi per susceptible. The simulator records which
// infections were internal (through an S-I link) versus external,
// since estimators for the open model can use those labels.
//
// Also here: synthesis of partially observed data (hide a fraction
// of recovery times, emit periodic status reports) and the random
// graph generators used for initial networks.
/******************************************************************/
#ifndef EPINET_SIMULATOR_HPP
#define EPINET_SIMULATOR_HPP

#include <cstdint>
#include <optional>
#include <utility>

#include "epinet/core.hpp"
#include "epinet/rng.hpp"

namespace epinet {

// Absorbing state: nothing can happen (total rate zero).
class Extinct : public std::runtime_error {
public:
    Extinct() : std::runtime_error("absorbing state: total event rate is zero") {}
};

struct SimConfig {
    ProcessState g0;                        // initial network (statuses may mark infectives)
    std::optional<std::vector<int>> seeds;  // explicit initially infectious persons
    int i0 = 1;                             // seed count when `seeds` is absent
    ModelParams params;
    double t_max = 0.0;
    std::uint64_t seed = 0;
    bool sis = false;                       // recoveries return to susceptible
};

struct SimResult {
    ProcessState g0;      // initial state actually used (seeds placed)
    EventTrace events;    // all events in (0, t_max]
    // open mode: one flag per infection event, true = internal transmission
    std::vector<std::uint8_t> infection_internal;
};

// total instantaneous rate: beta*SI + gamma*I + alpha.m_d + omega.m (+ xi*S)
double total_rate(const StateCounts& counts, const ModelParams& params);

// Draw the waiting time and the next event from the current state.
// The returned event carries the absolute time state.time() + dt.
// Throws Extinct when the total rate is zero.
std::pair<double, Event> next_event(const ProcessState& state, const ModelParams& params,
                                    Rng& rng);

SimResult simulate(const SimConfig& config);

// Hide eta of the exact recovery times and emit status reports every
// report_period time units (plus a final report at t_max).
PartialData synthesize_missingness(const ProcessState& g0, const EventTrace& events,
                                   double t_max, double eta, double report_period, Rng& rng,
                                   const std::vector<std::uint8_t>& infection_internal = {});

// Erdos-Renyi graph: every pair connected independently with probability p.
ProcessState erdos_renyi(int n, double p, Rng& rng);

// Hub-heavy graph by preferential attachment: each new node attaches
// floor(k) edges (plus one more with probability frac(k)) to existing
// nodes drawn with probability proportional to degree + 1.
ProcessState hubnet(int n, double k, Rng& rng);

} // namespace epinet

#endif
