/******************************************************************/
// ingest.hpp
//
// Turns raw proximity-ping logs and weekly symptom surveys into the
// model's event/report formats. All times are in days.
//
// Pings: keep only pings with signal strength strictly above the
// threshold; per pair, consecutive pings no more than the gap apart
// (default 7.5 minutes) form one contact. A contact contributes a
// link activation at its first ping and a termination at its last
// ping plus a uniform 1-6 minute tail (truncated below the pair's
// next contact if thresholds are customised to make that possible).
//
// Surveys: a week counts as influenza-like illness when the person
// reported a cough, at least one of fever/feverishness, chills, or
// body aches, and said they felt ill. A single healthy week between
// two ill weeks is bridged into one extended episode; second
// episodes of the same person within a period are dropped (and
// counted). The illness onset date of the episode's first week,
// minus a uniform 0-3 day delay, becomes the infection time; when
// that lands at or before the period start the person is treated as
// initially infectious. Weekly ill/healthy reports are emitted from
// the infection-to-first-healthy-report span, so they are consistent
// with the sampled infection times by construction.
//
// Labels: an infection is internal when the person had at least one
// contact overlapping another person's infectious span within the
// three days before onset; otherwise external.
/******************************************************************/
#ifndef EPINET_INGEST_HPP
#define EPINET_INGEST_HPP

#include <optional>
#include <vector>

#include "epinet/core.hpp"
#include "epinet/rng.hpp"

namespace epinet {

class MissingOnset : public std::runtime_error {
public:
    explicit MissingOnset(const std::string& what) : std::runtime_error(what) {}
};

struct ContactPing {
    int p1 = -1, p2 = -1; // device pair, stored with p1 < p2
    double time = 0.0;    // days
    int rssi = 0;
};

struct SurveyRow {
    int person = -1;
    int week = 1; // 1-based within the period
    bool felt_ill = false;
    bool cough = false, fever = false, chills = false, aches = false;
    std::optional<double> onset; // day within the period
};

inline constexpr int kRssiMin = -90;
inline constexpr double kPingGapDays = 7.5 / 1440.0;
inline constexpr double kJitterLoDays = 1.0 / 1440.0;
inline constexpr double kJitterHiDays = 6.0 / 1440.0;
inline constexpr double kOnsetDelayDays = 3.0;
inline constexpr double kLabelWindowDays = 3.0;

std::vector<ContactPing> filter_pings(std::vector<ContactPing> pings, int rssi_min = kRssiMin);

// Filtered pings -> LinkOn/LinkOff trace, globally time-sorted.
EventTrace merge_contacts(std::vector<ContactPing> pings, Rng& rng,
                          double gap = kPingGapDays, double jitter_lo = kJitterLoDays,
                          double jitter_hi = kJitterHiDays);

struct IllnessEpisode {
    int person = -1;
    double onset = 0.0;
    double infection = 0.0;   // onset minus delay; <= 0 means initially infectious
    double end_report = 0.0;  // first healthy report time after the episode (inf if none)
};

struct IliResult {
    std::vector<IllnessEpisode> episodes;  // ascending by infection time
    std::vector<StatusReport> reports;     // weekly, final one at t_max
    std::vector<int> initially_ill;        // infectious at the period start
    int dropped_repeats = 0;               // suppressed second episodes
};

IliResult ili_cases(const std::vector<SurveyRow>& surveys, int n, double t_max, Rng& rng,
                    double delay_max = kOnsetDelayDays);

// One label per infection event (episodes with infection > 0), in
// infection-time order: 1 = internal, 0 = external.
std::vector<std::uint8_t> label_infections(const EventTrace& network_events,
                                           const std::vector<IllnessEpisode>& episodes,
                                           double t_max, double window = kLabelWindowDays);

// Bundle one observation period: initial state (initially ill marked,
// empty network), merged event trace, reports, and labels.
PartialData assemble_period(int n, const EventTrace& network_events, const IliResult& ili,
                            double t_max);

} // namespace epinet

#endif
