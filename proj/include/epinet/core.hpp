/******************************************************************/
// core.hpp
//
// Domain types shared by every other module:
//   -- DiseaseStatus / ModelParams
//        compartment labels and the rate vector of the coupled
//        epidemic-network process
//   -- Event / EventTrace
//        one infection, recovery, link activation or link
//        termination with its timestamp
//   -- ProcessState
//        disease status of every person plus the contact network at
//        an instant (value type; operations return new states)
//   -- StateCounts
//        the bookkeeping summary (S, I, S-I links, per-class link
//        counts) that drives both simulation rates and likelihood
//        exposures
//
// Link classes are keyed by the health of the two endpoints: healthy
// means susceptible or recovered, so the classes are H-H, H-I, I-I.
// Susceptible and recovered individuals behave identically from the
// network's point of view; the distinction is kept in the status
// vector because the epidemic side needs it.
/******************************************************************/
#ifndef EPINET_CORE_HPP
#define EPINET_CORE_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace epinet {

enum class DiseaseStatus : std::uint8_t { Susceptible, Infectious, Recovered };

inline bool healthy(DiseaseStatus s) { return s != DiseaseStatus::Infectious; }

// link class indices for the 3-vectors below
enum LinkClass : int { HH = 0, HI = 1, II = 2 };

// Rates of the coupled process. alpha[c]/omega[c] are per-pair activation /
// termination rates for class c in {HH, HI, II}. xi, when present, is the
// per-susceptible rate of infection from outside the observed population
// (open-population variant).
struct ModelParams {
    double beta = 0.0;
    double gamma = 0.0;
    std::array<double, 3> alpha{0.0, 0.0, 0.0};
    std::array<double, 3> omega{0.0, 0.0, 0.0};
    std::optional<double> xi;

    bool open() const { return xi.has_value(); }
};

enum class EventKind : std::uint8_t { Infection, Recovery, LinkOn, LinkOff };

inline bool is_network(EventKind k) {
    return k == EventKind::LinkOn || k == EventKind::LinkOff;
}

// One event. p2 is meaningful only for network events and satisfies p1 < p2
// (undirected canonical order); epidemic events carry p2 = -1.
struct Event {
    double time = 0.0;
    EventKind kind = EventKind::Infection;
    int p1 = -1;
    int p2 = -1;

    static Event infection(double t, int p) { return {t, EventKind::Infection, p, -1}; }
    static Event recovery(double t, int p) { return {t, EventKind::Recovery, p, -1}; }
    static Event link_on(double t, int a, int b) {
        return {t, EventKind::LinkOn, a < b ? a : b, a < b ? b : a};
    }
    static Event link_off(double t, int a, int b) {
        return {t, EventKind::LinkOff, a < b ? a : b, a < b ? b : a};
    }
};

using EventTrace = std::vector<Event>;

// Thrown when an event cannot be applied to the current state.
class IncompatibleEvent : public std::runtime_error {
public:
    explicit IncompatibleEvent(const std::string& what) : std::runtime_error(what) {}
};

// Snapshot of the process: who is in which compartment and which pairs are
// connected. Neighbor lists are kept per person, so edge updates and
// neighborhood queries cost O(degree).
class ProcessState {
public:
    ProcessState() = default;
    explicit ProcessState(int n, double time = 0.0)
        : time_(time), status_(static_cast<std::size_t>(n), DiseaseStatus::Susceptible),
          nbrs_(static_cast<std::size_t>(n)) {}

    int n() const { return static_cast<int>(status_.size()); }
    double time() const { return time_; }
    void set_time(double t) { time_ = t; }

    DiseaseStatus status(int p) const { return status_.at(static_cast<std::size_t>(p)); }
    void set_status(int p, DiseaseStatus s) { status_.at(static_cast<std::size_t>(p)) = s; }

    const std::vector<int>& neighbors(int p) const {
        return nbrs_.at(static_cast<std::size_t>(p));
    }

    bool connected(int a, int b) const;
    std::size_t edge_count() const { return edge_count_; }

    // add/remove an undirected edge; throws IncompatibleEvent on a
    // duplicate add or a missing remove
    void add_edge(int a, int b);
    void remove_edge(int a, int b);

    // every undirected edge once, with p1 < p2
    std::vector<std::pair<int, int>> edges() const;

    int count(DiseaseStatus s) const;

private:
    void check_person(int p) const;

    double time_ = 0.0;
    std::vector<DiseaseStatus> status_;
    std::vector<std::vector<int>> nbrs_;
    std::size_t edge_count_ = 0;
};

// Bookkeeping summary of a state. m / m_max / m_d are indexed by LinkClass.
struct StateCounts {
    long s = 0, i = 0, h = 0;
    long si = 0;                       // connected S-I pairs
    std::array<long, 3> m{0, 0, 0};    // existing links per class
    std::array<long, 3> m_max{0, 0, 0};// all pairs per class: H(H-1)/2, H*I, I(I-1)/2
    std::array<long, 3> m_d{0, 0, 0};  // disconnected pairs = m_max - m
};

// class of the pair (a, b) given the two statuses
inline LinkClass pair_class(DiseaseStatus a, DiseaseStatus b) {
    const int ill = (healthy(a) ? 0 : 1) + (healthy(b) ? 0 : 1);
    return static_cast<LinkClass>(ill);
}

// Exact recount of all statistics from the status vector and edge set.
StateCounts state_counts(const ProcessState& state);

// Apply one event, returning the updated state; the input is untouched.
// Preconditions: infection target is susceptible (and, unless
// allow_external, has at least one infectious neighbor); recovery target is
// infectious; LinkOn pair disconnected; LinkOff pair connected; the event
// time does not precede the state's time. Violations throw
// IncompatibleEvent naming the offender. SIS variant: recovery returns the
// person to Susceptible instead of Recovered.
ProcessState apply_event(const ProcessState& state, const Event& e,
                         bool allow_external = false, bool sis = false);

// In-place flavor used by replay loops (same checks, no copy).
void apply_event_inplace(ProcessState& state, const Event& e,
                         bool allow_external = false, bool sis = false);

struct ValidationReport {
    bool ok = true;
    std::size_t bad_index = 0;  // index of the first offending event
    std::string message;        // empty when ok
};

// Periodic snapshot of who is ill, produced by surveys or synthesized from a
// complete trace. ill[p] is true when person p is infectious at `time`.
struct StatusReport {
    double time = 0.0;
    std::vector<bool> ill;
};

// What an observer retains when exact recovery times are missing: the
// initial state, every event except the hidden recoveries, and periodic
// status reports. `hidden` carries the ground-truth deleted times for
// evaluation only; inference code never reads it.
struct PartialData {
    ProcessState g0;
    EventTrace events;
    std::vector<StatusReport> reports;
    double t_max = 0.0;
    std::vector<std::pair<int, double>> hidden;
    // open-population mode: one flag per infection event (in trace order),
    // true = internal (network-transmitted), false = external. Empty in
    // closed-population data.
    std::vector<std::uint8_t> infection_internal;

    bool open() const { return !infection_internal.empty(); }
};

// Replay events from g0 and report the first violation (incompatible event
// or non-increasing time). Never throws.
ValidationReport validate_trace(const ProcessState& g0, const EventTrace& events,
                                bool allow_external = false, bool sis = false);

} // namespace epinet

#endif
