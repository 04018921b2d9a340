#ifndef TRENDBAND_BANDS_HPP
#define TRENDBAND_BANDS_HPP

#include <cstddef>
#include <vector>

#include "trendband/covariance.hpp"
#include "trendband/estimators.hpp"

namespace trendband {

enum class BandKind { simultaneous, pointwise };

struct ConfidenceBand {
    std::vector<double> eval_grid;
    std::vector<double> center;
    std::vector<double> lower;
    std::vector<double> upper;
    double level = 0.0;  // 1 - gamma
    std::size_t n = 0;
    BandKind kind = BandKind::simultaneous;
};

/// Simultaneous band: center +- sqrt(-2 log(gamma/2) * Rhat(t,t) / n).
/// The radius inverts the Gaussian supremum tail bound 2 exp(-lambda^2 / 2).
ConfidenceBand simultaneous_band(const TrendEstimate& trend, const VarianceEstimate& variance,
                                 double gamma);

/// Pointwise comparison band: center +- z_{1-gamma/2} * sqrt(Rhat(t,t) / n).
ConfidenceBand pointwise_band(const TrendEstimate& trend, const VarianceEstimate& variance,
                              double gamma);

/// Approximate tail bound 2 exp(-lambda^2 / 2) for the supremum of the
/// absolute value of a standardized Gaussian process. lambda > 0.
double tail_bound(double lambda);

/// Standard normal quantile, rational approximation (Wichura's algorithm,
/// absolute error well below 1e-8). prob must lie in (0, 1).
double normal_quantile(double prob);

/// Standard normal CDF via erfc.
double normal_cdf(double x);

}  // namespace trendband

#endif
