#ifndef TRENDBAND_EXPERIMENTS_HPP
#define TRENDBAND_EXPERIMENTS_HPP

#include <cstdint>
#include <vector>

#include "trendband/estimators.hpp"
#include "trendband/gp.hpp"

namespace trendband {

// Replication r of every experiment draws its randomness from the counter
// scheme seed_r = seed + r, split into a process stream derive_seed(seed_r, 0)
// and a noise stream derive_seed(seed_r, 1). Results are stored per index and
// reduced in index order, so execution order cannot affect any report.

/// Echo of the generating configuration, serialized into every report.
struct SimulationSetup {
    GPModel model;
    NoiseModel noise;
    std::size_t n = 0;
    std::size_t p = 0;
    EstimatorConfig estimator;
    double bandwidth = 0.0;  // resolved h
    std::size_t replications = 0;
    std::uint64_t seed = 0;
};

struct CoverageReport {
    SimulationSetup setup;
    double gamma = 0.0;
    std::size_t eval_points = 0;
    /// Fraction of replications whose simultaneous band contains the true
    /// trend at every evaluation point.
    double simultaneous_coverage = 0.0;
    /// Same sup-criterion applied to the pointwise comparison band.
    double pointwise_band_sup_coverage = 0.0;
    /// Mean over evaluation points of the per-point coverage frequency of
    /// the pointwise band.
    double pointwise_band_mean_coverage = 0.0;
    double mean_halfwidth = 0.0;  // simultaneous band, averaged over grid and reps
    /// sup_t |muhat(t) - mu(t)| per replication, in replication order.
    std::vector<double> sup_deviations;
    double sup_deviation_mean = 0.0;
    double sup_deviation_max = 0.0;
};

struct NormalityReport {
    SimulationSetup setup;
    double t0 = 0.0;
    double model_variance = 0.0;      // R(t0, t0) from the model
    double empirical_variance = 0.0;  // of sqrt(n) (muhat(t0) - mu(t0))
    double variance_ratio = 0.0;      // empirical / model
    double skewness = 0.0;
    double excess_kurtosis = 0.0;
    /// Kolmogorov-Smirnov distance against N(0, R(t0, t0)).
    double ks_distance = 0.0;
};

struct RateCheckReport {
    SimulationSetup setup;  // p echoes the first entry of p_list
    double t0 = 0.0;
    std::vector<std::size_t> p_list;
    std::vector<double> variances;  // empirical variance of muhat(t0) per p
    double max_min_ratio = 0.0;
    /// Ratio a 1/(nph) variance rate would predict across p_list at fixed
    /// n and h: max(p) / min(p).
    double nph_predicted_ratio = 0.0;
};

/// M replications of simulate -> estimate trend -> estimate variance ->
/// build bands -> check containment of the true trend on the evaluation
/// grid. Throws DegenerateModelError when the model covariance vanishes on
/// the whole grid and the noise is zero.
CoverageReport coverage_experiment(const GPModel& model, const NoiseModel& noise, std::size_t n,
                                   std::size_t p, const EstimatorConfig& estimator, double gamma,
                                   std::size_t replications, std::uint64_t seed,
                                   std::size_t eval_points = 401);

/// Collects sqrt(n) (muhat(t0) - mu(t0)) across replications and compares
/// its distribution with the Gaussian limit N(0, R(t0, t0)).
NormalityReport normality_diagnostic(const GPModel& model, const NoiseModel& noise, std::size_t n,
                                     std::size_t p, const EstimatorConfig& estimator, double t0,
                                     std::size_t replications, std::uint64_t seed);

/// Empirical variance of the local-linear trend at t0 for fixed n across a
/// list of grid sizes; discriminates the n^{1/2} normalization from an
/// (nph)^{1/2} one, which would predict variance shrinking like 1/p.
RateCheckReport rate_check(const GPModel& model, const NoiseModel& noise, std::size_t n,
                           const std::vector<std::size_t>& p_list,
                           const EstimatorConfig& estimator, double t0,
                           std::size_t replications, std::uint64_t seed);

}  // namespace trendband

#endif
