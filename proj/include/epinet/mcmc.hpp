/******************************************************************/
// mcmc.hpp
//
// Data-augmented Gibbs sampler. Each sweep alternates two steps:
// impute the latent recovery times interval by interval, conditional
// on the current recovery rate; then draw all rate parameters from
// their conjugate Gamma posteriors given the augmented (complete)
// trace. Exposures of the network classes depend on who is
// infectious when, so the sufficient statistics are recomputed from
// a full replay every sweep.
//
// Also here: effective sample size (initial-positive-sequence
// truncation), the Geweke window comparison, and a wall-clock
// benchmark harness for the imputation samplers.
/******************************************************************/
#ifndef EPINET_MCMC_HPP
#define EPINET_MCMC_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "epinet/augmentation.hpp"
#include "epinet/estimators.hpp"

namespace epinet {

class DegenerateChain : public std::runtime_error {
public:
    explicit DegenerateChain(const std::string& what) : std::runtime_error(what) {}
};

enum class ImputeMethod { Darci, Reject, Mh };

const char* impute_method_name(ImputeMethod m);
ImputeMethod parse_impute_method(const std::string& name); // throws std::invalid_argument

struct Chain {
    std::vector<std::string> names;
    std::vector<std::vector<double>> draws; // retained iterations x parameters
    int burnin = 0;
    int thin = 1;
    std::uint64_t seed = 0;
    std::string method;
    std::vector<double> column(std::size_t j) const;
};

// Run the sampler on one dataset, or on several independent
// realisations sharing the same parameters (statistics add).
Chain gibbs_run(const PartialData& partial, const PriorSet& priors, int iters, int burnin,
                int thin, ImputeMethod method, std::uint64_t seed);
Chain gibbs_run(const std::vector<PartialData>& periods, const PriorSet& priors, int iters,
                int burnin, int thin, ImputeMethod method, std::uint64_t seed);

// n / (1 + 2 sum rho_k), truncated at the first non-positive paired
// autocorrelation sum, clamped to [1, n].
double ess(const std::vector<double>& series);

struct GewekeResult {
    double z = 0.0;
    double p = 1.0;
};
// Compare the means of the first and last window fractions, with
// spectral-density-at-zero variance estimates per window.
GewekeResult geweke(const std::vector<double>& series, double first = 0.1, double last = 0.5);

struct TimingRow {
    std::size_t instance = 0;
    int r_count = 0;
    std::string method;
    double min_us = 0.0;
    double median_us = 0.0;
};
std::vector<TimingRow> timing_benchmark(const std::vector<ImputationInterval>& instances,
                                        const std::vector<ImputeMethod>& methods, double gamma,
                                        int reps, std::uint64_t seed);

} // namespace epinet

#endif
