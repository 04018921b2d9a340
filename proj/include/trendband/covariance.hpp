#ifndef TRENDBAND_COVARIANCE_HPP
#define TRENDBAND_COVARIANCE_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "trendband/estimators.hpp"
#include "trendband/grid.hpp"

namespace trendband {

struct VarianceEstimate {
    std::vector<double> eval_grid;
    std::vector<double> values;  // Rhat(t, t) >= 0
    double noise_variance = 0.0;  // diagnostic; never subtracted from values
    TrendMethod smoother_method = TrendMethod::local_linear;
    double smoother_bandwidth = 0.0;
    std::size_t n = 0;
};

/// Rice-type first-difference estimator
/// sigma^2 = sum_i sum_j (Y_{i,j+1} - Y_ij)^2 / (2 n (p-1)), clamped at 0.
/// Upward-biased by trend and process increments; the bias vanishes as the
/// grid refines for smooth paths. Requires p >= 3.
double estimate_noise_variance(const FunctionalSample& sample);

/// Smooth each curve individually with the configured estimator, then take
/// the cross-curve sample variance at every evaluation point (clamped at 0).
/// An automatic bandwidth resolves against the full sample's replicate count
/// so the per-curve smoother matches the trend estimator's h. Requires n >= 2.
VarianceEstimate estimate_pointwise_variance(const FunctionalSample& sample,
                                             const EstimatorConfig& smoother,
                                             std::span<const double> eval_grid);

}  // namespace trendband

#endif
