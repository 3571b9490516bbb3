/******************************************************************/
// estimators.hpp
//
// Likelihood-based estimation for the coupled process. Everything
// reduces to Poisson-process algebra: each rate parameter has an
// event count and an at-risk exposure, so
//
//   MLE          = count / exposure
//   Ga(a, b) prior -> Ga(a + count, b + exposure) posterior
//   exact CI     = gamma quantiles in count around the observed count
//
// Static and homogeneous-mixing fits differ only in the exposure
// used for the transmission rate: the initial network's S-I links
// held fixed, or all susceptible-infectious person pairs.
//
// Open-population fits estimate the external rate xi together with
// beta. With per-infection source labels both are closed form; with
// unlabelled data xi = kappa * beta is profiled and kappa found by a
// bracketed root search on the profile-score function.
/******************************************************************/
#ifndef EPINET_ESTIMATORS_HPP
#define EPINET_ESTIMATORS_HPP

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "epinet/likelihood.hpp"
#include "epinet/numeric.hpp"

namespace epinet {

class NoRoot : public NumericError {
public:
    explicit NoRoot(const std::string& what) : NumericError(what) {}
};

struct GammaDist {
    double shape = 1.0;
    double rate = 1.0;
    double mean() const { return shape / rate; }
    double sd() const;
    double quantile(double p) const { return gamma_quantile_standard(shape, p) / rate; }
};

struct PriorSet {
    GammaDist beta, gamma;
    std::array<GammaDist, 3> alpha, omega;
    std::optional<GammaDist> xi;
    static PriorSet defaults();
};

// canonical parameter order used across fits, chains, and reports
extern const std::array<const char*, 8> kParamNames; // beta, gamma, alpha_*, omega_*

struct MleFit {
    ModelParams params;                        // point estimates
    std::vector<std::string> nonidentifiable;  // events seen but zero exposure
};

MleFit mle_closed(const SufficientStats& stats);

// Transmission-rate estimates under the three network treatments:
// the true dynamic exposure, the initial network frozen in place,
// and homogeneous mixing over all S-I person pairs.
struct NetworkTreatmentFit {
    long n_e = 0;
    double dynamic_exposure = 0.0, static_exposure = 0.0, mixing_exposure = 0.0;
    double dynamic_beta = 0.0, static_beta = 0.0, mixing_beta = 0.0;
};
NetworkTreatmentFit mle_network_treatments(const ProcessState& g0, const EventTrace& events,
                                           double t_max);

struct PosteriorSet {
    GammaDist beta, gamma;
    std::array<GammaDist, 3> alpha, omega;
    std::optional<GammaDist> xi; // set when stats are labelled and a xi prior exists
};
PosteriorSet posterior_params(const SufficientStats& stats, const PriorSet& priors);

struct OpenFit {
    double beta = 0.0;
    double xi = 0.0;
    double kappa = 0.0; // xi / beta
};
// Requires labels on the statistics (attach_labels).
OpenFit mle_open_labeled(const SufficientStats& stats);
// Unlabelled data: profile root search; throws NoRoot when no bracket exists.
OpenFit mle_open_numeric(const SufficientStats& stats);

struct Interval {
    double lo = 0.0, hi = 0.0;
};
// Exact Poisson-rate confidence interval from count and exposure.
Interval rate_confidence_interval(long count, double exposure, double level = 0.95);

} // namespace epinet

#endif
