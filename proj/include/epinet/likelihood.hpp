/******************************************************************/
// likelihood.hpp
//
// Complete-data log-likelihood of the coupled process, factorised
// into sufficient statistics. For every parameter the contribution
// is (event count) * log(rate) - rate * exposure, where exposure is
// the time integral of the number of units at risk:
//
//   beta   : S-I links            count n_e          exposure exp_si
//   gamma  : infectious persons   count n_r          exposure exp_i
//   alpha_k: disconnected pairs   counts c[k]        exposure exp_md[k]
//   omega_k: connected pairs      counts d[k]        exposure exp_m[k]
//   xi     : susceptibles (open)  count n_e_ext      exposure exp_s
//
// Two parameter-free terms complete the density: log_nbr, the sum of
// log(number of infectious neighbours) over infection events (each
// link fires independently, so the per-person hazard is beta times
// that count), and log_mclass, the sum over network events of the
// log pre-event count of the pair class involved (the uniform-pair
// factor). log_mclass does not affect estimation and can be dropped
// from reported values via a flag; it is included by default so that
// evaluations are true log-densities.
//
// Exposures integrate the left-limit (pre-event) counts over each
// inter-event interval, with a final segment up to t_max. Initially
// infectious persons are treated as given, so infection-event counts
// cover exactly the events in the trace.
/******************************************************************/
#ifndef EPINET_LIKELIHOOD_HPP
#define EPINET_LIKELIHOOD_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "epinet/core.hpp"

namespace epinet {

class InvalidTrace : public std::runtime_error {
public:
    explicit InvalidTrace(const std::string& what) : std::runtime_error(what) {}
};

enum class Variant { SIR, SIS };

struct SufficientStats {
    double t_max = 0.0;
    long n_e = 0;                         // infection events
    long n_r = 0;                         // recovery events
    long n_e_int = -1, n_e_ext = -1;      // labelled splits; -1 until labels attached
    std::array<long, 3> c{0, 0, 0};       // activations by class
    std::array<long, 3> d{0, 0, 0};       // terminations by class
    double exp_si = 0.0;                  // integral of S-I link count
    double exp_i = 0.0;                   // integral of infectious count
    double exp_s = 0.0;                   // integral of susceptible count
    std::array<double, 3> exp_md{0, 0, 0};// integrals of disconnected-pair counts
    std::array<double, 3> exp_m{0, 0, 0}; // integrals of connected-pair counts
    double log_nbr = 0.0;                 // sum of log(infectious neighbours) at infections
    double log_mclass = 0.0;              // sum of log(pre-event class count) at network events
    bool orphan_infection = false;        // an infection fired with no infectious neighbour
    std::vector<long> inf_nbr;            // infectious-neighbour count per infection event
    std::vector<std::uint8_t> inf_internal; // per-infection labels (empty = unlabelled)
};

// Replay the trace and accumulate all statistics. Throws InvalidTrace
// on out-of-order times, events past t_max, or impossible transitions.
SufficientStats sufficient_stats(const ProcessState& g0, const EventTrace& events,
                                 double t_max, Variant variant = Variant::SIR);

// Attach internal/external labels (one per infection event, in trace order).
void attach_labels(SufficientStats& stats, const std::vector<std::uint8_t>& internal);

// Merge statistics from independent realisations (counts and exposures add).
SufficientStats combine_stats(const SufficientStats& a, const SufficientStats& b);

// Closed-population log-likelihoods. SIS uses the same factorisation;
// the statistics must have been accumulated with the matching variant.
double loglik_sir(const SufficientStats& stats, const ModelParams& params,
                  bool include_class_term = true);
double loglik_sis(const SufficientStats& stats, const ModelParams& params,
                  bool include_class_term = true);

// Open-population log-likelihood; params.xi must be set. Infection
// events contribute log(beta * I_p + xi) individually.
double loglik_open(const SufficientStats& stats, const ModelParams& params,
                   bool include_class_term = true);

// The (beta, kappa) profile terms of the open log-likelihood under the
// proportional parameterisation xi = kappa * beta, in extended
// precision for root finding and derivative checks:
//   n_e log(beta) + sum_p log(I_p + kappa) - beta (exp_si + kappa exp_s)
long double loglik_open_bk(const SufficientStats& stats, long double beta, long double kappa);

} // namespace epinet

#endif
