/******************************************************************/
// augmentation.hpp
//
// Data augmentation for missing recovery times. Periodic status
// reports tell us that a person who was ill at report time u and
// healthy at the next report time v recovered somewhere in (u, v];
// when the exact recovery event is absent from the trace, the time
// is latent. Persons sharing the same report window form one
// imputation interval and are imputed jointly, because the epidemic
// constrains them jointly: an infection inside the window whose only
// possible sources are those same persons requires at least one of
// them to still be infectious at the infection time. Disjoint
// intervals are conditionally independent and can be imputed
// separately.
//
// Samplers for one interval, conditional on the recovery rate:
//
//  - darci: walk the infections in ascending time order; whenever an
//    infection's possible sources are all latent, pick one uniformly
//    and raise the lower bound of its recovery to the infection
//    time; then draw every recovery from a truncated exponential on
//    (bound, v]. Never rejects, and every output is compatible. On
//    intervals where some infection has two or more latent
//    candidates the draw is approximate; the rejection sampler below
//    is the exact reference.
//
//  - reject_impute: draw everything from the unconstrained truncated
//    exponential on (u, v] and start over until compatible. Exact,
//    but the acceptance rate can be arbitrarily small.
//
//  - mh_impute: propose as the rejection sampler does, once; keep
//    the proposal iff compatible, else keep the current values.
/******************************************************************/
#ifndef EPINET_AUGMENTATION_HPP
#define EPINET_AUGMENTATION_HPP

#include <map>
#include <vector>

#include "epinet/core.hpp"
#include "epinet/likelihood.hpp"
#include "epinet/rng.hpp"

namespace epinet {

class InconsistentReports : public std::runtime_error {
public:
    explicit InconsistentReports(const std::string& what) : std::runtime_error(what) {}
};

class NoPossibleInfector : public std::runtime_error {
public:
    explicit NoPossibleInfector(const std::string& what) : std::runtime_error(what) {}
};

class MaxAttemptsExceeded : public std::runtime_error {
public:
    explicit MaxAttemptsExceeded(const std::string& what) : std::runtime_error(what) {}
};

class DegenerateInterval : public std::runtime_error {
public:
    explicit DegenerateInterval(const std::string& what) : std::runtime_error(what) {}
};

// An infection inside the window. Possible sources split into those
// known to be infectious at that moment and those whose recovery is
// latent (same interval's q_set) and who were infected beforehand.
// External infections (open mode) carry no source constraint.
struct InsideInfection {
    int person = -1;
    double time = 0.0;
    bool internal = true;
    int known_sources = 0;       // neighbours certainly infectious at `time`
    std::vector<int> q_sources;  // latent-recovery neighbours infected before `time`
};

struct ImputationInterval {
    double u = 0.0, v = 0.0;                 // recoveries lie in (u, v]
    std::vector<int> q_set;                  // persons with latent recovery times
    std::vector<double> q_lower;             // own infection time if inside, else u
    std::vector<InsideInfection> p_list;     // infections inside, ascending by time
    ProcessState z_u;                        // reconstructed state at u
    int r_count() const { return static_cast<int>(q_set.size()); }
};

// Scan reports against the event trace and build all intervals that
// contain at least one latent recovery. Throws InconsistentReports
// when the reports cannot be reconciled with the events.
std::vector<ImputationInterval> extract_intervals(const PartialData& data);

// Exponential(rate) conditioned on (s, t); inverse-CDF draw.
double sample_texp(double rate, double s, double t, Rng& rng);

using Imputation = std::map<int, double>; // person -> recovery time

Imputation darci(const ImputationInterval& iv, double gamma, Rng& rng);
Imputation reject_impute(const ImputationInterval& iv, double gamma, Rng& rng,
                         long max_attempts = 1000000);
Imputation mh_impute(const ImputationInterval& iv, double gamma, const Imputation& current,
                     Rng& rng);

// True iff every latent recovery is inside its window, after the
// person's own infection, and every internal infection inside
// retains at least one infectious source.
bool compatible(const ImputationInterval& iv, const Imputation& r);

} // namespace epinet

#endif
