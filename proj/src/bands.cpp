#include "trendband/bands.hpp"

#include <cmath>

#include "trendband/errors.hpp"

namespace trendband {

namespace {

void check_band_inputs(const TrendEstimate& trend, const VarianceEstimate& variance,
                       double gamma) {
    if (!(gamma > 0.0) || !(gamma < 1.0))
        throw InvalidLevelError("gamma must lie strictly between 0 and 1");
    if (trend.eval_grid != variance.eval_grid)
        throw GridMismatchError("trend and variance use different evaluation grids");
    if (trend.n < 1) throw ValidationError("trend estimate carries no replicate count");
}

ConfidenceBand build_band(const TrendEstimate& trend, const VarianceEstimate& variance,
                          double gamma, double radius, BandKind kind) {
    ConfidenceBand band;
    band.eval_grid = trend.eval_grid;
    band.center = trend.values;
    band.lower.resize(trend.values.size());
    band.upper.resize(trend.values.size());
    const double n = static_cast<double>(trend.n);
    for (std::size_t k = 0; k < trend.values.size(); ++k) {
        const double half = radius * std::sqrt(variance.values[k] / n);
        band.lower[k] = trend.values[k] - half;
        band.upper[k] = trend.values[k] + half;
    }
    band.level = 1.0 - gamma;
    band.n = trend.n;
    band.kind = kind;
    return band;
}

}  // namespace

ConfidenceBand simultaneous_band(const TrendEstimate& trend, const VarianceEstimate& variance,
                                 double gamma) {
    check_band_inputs(trend, variance, gamma);
    const double radius = std::sqrt(-2.0 * std::log(gamma / 2.0));
    return build_band(trend, variance, gamma, radius, BandKind::simultaneous);
}

ConfidenceBand pointwise_band(const TrendEstimate& trend, const VarianceEstimate& variance,
                              double gamma) {
    check_band_inputs(trend, variance, gamma);
    const double radius = normal_quantile(1.0 - gamma / 2.0);
    return build_band(trend, variance, gamma, radius, BandKind::pointwise);
}

double tail_bound(double lambda) {
    if (!(lambda > 0.0)) throw ValidationError("lambda must be positive");
    return 2.0 * std::exp(-0.5 * lambda * lambda);
}

// Wichura's AS 241 rational approximation (PPND16).
double normal_quantile(double prob) {
    if (!(prob > 0.0) || !(prob < 1.0))
        throw ValidationError("probability must lie strictly between 0 and 1");
    const double q = prob - 0.5;
    if (std::abs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        const double num =
            q * (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                      6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r +
                    1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r +
                  1.3314166789178437745e2) * r + 3.3871328727963666080e0);
        const double den =
            (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
                  3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r +
                5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r +
              4.2313330701600911252e1) * r + 1.0);
        return num / den;
    }
    double r = q < 0.0 ? prob : 1.0 - prob;
    r = std::sqrt(-std::log(r));
    double value;
    if (r <= 5.0) {
        r -= 1.6;
        const double num =
            (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                  2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
                3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
              4.63033784615654529590e0) * r + 1.42343711074968357734e0);
        const double den =
            (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                  1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
              2.05319162663775882187e0) * r + 1.0);
        value = num / den;
    } else {
        r -= 5.0;
        const double num =
            (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                  1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
              5.46378491116411436990e0) * r + 6.65790464350110377720e0);
        const double den =
            (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                  1.84631831751005468180e-6) * r + 7.86869131145613259100e-4) * r +
                1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
              5.99832206555887937690e-1) * r + 1.0);
        value = num / den;
    }
    return q < 0.0 ? -value : value;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x * 0.7071067811865475244); }

}  // namespace trendband
