#include "trendband/covariance.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "trendband/errors.hpp"

namespace trendband {

double estimate_noise_variance(const FunctionalSample& sample) {
    const std::size_t n = sample.curve_count();
    const std::size_t p = sample.point_count();
    if (p < 3) throw InsufficientDataError("noise variance needs at least 3 grid points");
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j + 1 < p; ++j) {
            const double d = sample(i, j + 1) - sample(i, j);
            sum += d * d;
        }
    }
    const double estimate = sum / (2.0 * static_cast<double>(n) * static_cast<double>(p - 1));
    return estimate < 0.0 ? 0.0 : estimate;
}

VarianceEstimate estimate_pointwise_variance(const FunctionalSample& sample,
                                             const EstimatorConfig& smoother,
                                             std::span<const double> eval_grid) {
    const std::size_t n = sample.curve_count();
    if (n < 2) throw InsufficientDataError("pointwise variance needs at least 2 curves");

    // The automatic bandwidth resolves against the full replicate count, so
    // the per-curve smoother uses the same h as the trend estimator would.
    EstimatorConfig per_curve = smoother;
    per_curve.bandwidth = resolve_bandwidth(smoother, sample.grid().horizon(), n);

    const std::size_t m = eval_grid.size();
    Matrix smoothed(n, m);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> row(sample.data().row(i).begin(), sample.data().row(i).end());
        FunctionalSample single(Matrix(1, sample.point_count(), std::move(row)), sample.grid());
        const TrendEstimate fit = estimate_trend(single, per_curve, eval_grid);
        for (std::size_t k = 0; k < m; ++k) smoothed(i, k) = fit.values[k];
    }

    VarianceEstimate estimate;
    estimate.eval_grid.assign(eval_grid.begin(), eval_grid.end());
    estimate.values.resize(m);
    for (std::size_t k = 0; k < m; ++k) {
        double lo = smoothed(0, k), hi = smoothed(0, k), mean = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            lo = std::min(lo, smoothed(i, k));
            hi = std::max(hi, smoothed(i, k));
            mean += smoothed(i, k);
        }
        // Zero spread is exactly zero variance; the centered sum below would
        // only accumulate rounding dust from the division by n.
        if (lo == hi) {
            estimate.values[k] = 0.0;
            continue;
        }
        mean /= static_cast<double>(n);
        double ss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = smoothed(i, k) - mean;
            ss += d * d;
        }
        const double value = ss / static_cast<double>(n - 1);
        estimate.values[k] = value < 0.0 ? 0.0 : value;
    }
    estimate.noise_variance = sample.point_count() >= 3 ? estimate_noise_variance(sample) : 0.0;
    estimate.smoother_method = smoother.method;
    estimate.smoother_bandwidth = *per_curve.bandwidth;
    estimate.n = n;
    return estimate;
}

}  // namespace trendband
