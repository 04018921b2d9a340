#ifndef TRENDBAND_ESTIMATORS_HPP
#define TRENDBAND_ESTIMATORS_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "trendband/grid.hpp"
#include "trendband/kernels.hpp"

namespace trendband {

enum class TrendMethod { clark, local_linear };

TrendMethod method_from_name(std::string_view name);
std::string method_name(TrendMethod method);

struct EstimatorConfig {
    TrendMethod method = TrendMethod::local_linear;
    Kernel kernel = epanechnikov_kernel();
    std::optional<double> bandwidth;  // empty = automatic rule
};

/// Explicit bandwidth, or the default rule
/// h = horizon * n^{-1/4} * (log max(n, 3))^{-1/2}.
double resolve_bandwidth(const EstimatorConfig& config, double horizon, std::size_t n);

/// count equispaced points on [0, horizon], boundaries included.
std::vector<double> default_eval_grid(double horizon, std::size_t count = 401);

struct TrendEstimate {
    std::vector<double> eval_grid;
    std::vector<double> values;
    EstimatorConfig config;
    double bandwidth = 0.0;  // resolved h actually used
    std::size_t n = 0;       // replicate count of the source sample
    std::uint64_t sample_fingerprint = 0;
};

/// Boundary-corrected convolution estimator: the kernel-weighted average of
/// the interpolated mean curve over [0, T], renormalized by the kernel mass
/// that falls inside [0, T].
///
/// The integral is exact: the window [max(0, t-h), min(T, t+h)] is split at
/// the design knots and at the kernel's polynomial breakpoints, and each
/// piece (polynomial kernel times linear interpolant) is integrated by
/// Gauss-Legendre quadrature of sufficient order.
TrendEstimate clark_estimate(const FunctionalSample& sample, const EstimatorConfig& config,
                             std::span<const double> eval_grid);

/// Intercept of the kernel-weighted least-squares line fitted to the
/// cross-sectional means around each evaluation point.
TrendEstimate local_linear_estimate(const FunctionalSample& sample, const EstimatorConfig& config,
                                    std::span<const double> eval_grid);

/// Dispatch on config.method.
TrendEstimate estimate_trend(const FunctionalSample& sample, const EstimatorConfig& config,
                             std::span<const double> eval_grid);

/// Weights w(t) with estimate(t) = sum_j w_j(t) * means_j, exactly. Both
/// estimators are linear in the data. Requires an explicit bandwidth in the
/// config (the automatic rule needs the replicate count, which a grid alone
/// does not carry).
std::vector<double> effective_weights(const EstimatorConfig& config, const DesignGrid& grid,
                                      double t);

}  // namespace trendband

#endif
