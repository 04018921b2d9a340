#include "trendband/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "trendband/bands.hpp"
#include "trendband/covariance.hpp"
#include "trendband/errors.hpp"

namespace trendband {

namespace {

void check_replications(std::size_t replications, std::size_t minimum) {
    if (replications < minimum)
        throw InsufficientDataError("experiment needs at least " + std::to_string(minimum) +
                                    " replications");
}

void check_t0(double t0, double horizon) {
    if (!(t0 >= 0.0) || !(t0 <= horizon))
        throw ValidationError("t0 must lie within [0, horizon]");
}

bool covariance_vanishes_on(const GPModel& model, const DesignGrid& grid) {
    for (std::size_t j = 0; j < grid.size(); ++j)
        if (model.cov_at(grid[j], grid[j]) != 0.0) return false;
    return true;
}

SimulationSetup make_setup(const GPModel& model, const NoiseModel& noise, std::size_t n,
                           std::size_t p, const EstimatorConfig& estimator,
                           std::size_t replications, std::uint64_t seed) {
    SimulationSetup setup;
    setup.model = model;
    setup.noise = noise;
    setup.n = n;
    setup.p = p;
    setup.estimator = estimator;
    setup.bandwidth = resolve_bandwidth(estimator, model.horizon, n);
    setup.replications = replications;
    setup.seed = seed;
    return setup;
}

/// Numeric failures inside a replication abort the experiment with the
/// replication index attached to the message.
template <typename Fn>
auto in_replication(std::size_t r, Fn&& body) {
    try {
        return body();
    } catch (const NumericError& e) {
        throw NumericError(std::string(e.what()) + " (replication " + std::to_string(r) + ")");
    }
}

double sample_variance(const std::vector<double>& values) {
    const double m = static_cast<double>(values.size());
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= m;
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    return ss / (m - 1.0);
}

}  // namespace

CoverageReport coverage_experiment(const GPModel& model, const NoiseModel& noise, std::size_t n,
                                   std::size_t p, const EstimatorConfig& estimator, double gamma,
                                   std::size_t replications, std::uint64_t seed,
                                   std::size_t eval_points) {
    if (n < 2) throw InsufficientDataError("coverage needs at least 2 curves per replication");
    if (!(gamma > 0.0) || !(gamma < 1.0))
        throw InvalidLevelError("gamma must lie strictly between 0 and 1");
    check_replications(replications, 1);

    const DesignGrid grid = DesignGrid::equispaced(p, model.horizon);
    if (covariance_vanishes_on(model, grid) && noise.sigma == 0.0)
        throw DegenerateModelError(
            "model variance vanishes on the whole grid and the noise is zero; "
            "every band would have zero width");

    const GpSampler sampler(model, grid);
    const std::vector<double> eval = default_eval_grid(model.horizon, eval_points);
    std::vector<double> truth(eval.size());
    for (std::size_t k = 0; k < eval.size(); ++k) truth[k] = model.mean_at(eval[k]);

    // Per-replication results, indexed by r and reduced afterwards in index
    // order; see the counter scheme note in the header.
    std::vector<char> sim_covered(replications, 0);
    std::vector<char> pw_sup_covered(replications, 0);
    std::vector<double> pw_fraction(replications, 0.0);
    std::vector<double> halfwidth(replications, 0.0);
    std::vector<double> sup_dev(replications, 0.0);

    for (std::size_t r = 0; r < replications; ++r) {
        const std::uint64_t seed_r = seed + r;
        const auto [sim, pw, trend] = in_replication(r, [&] {
            Matrix paths = sampler.draw(n, derive_seed(seed_r, 0));
            Matrix data = add_noise(paths, noise, derive_seed(seed_r, 1));
            const FunctionalSample sample(std::move(data), grid);
            TrendEstimate fit = estimate_trend(sample, estimator, eval);
            const VarianceEstimate variance =
                estimate_pointwise_variance(sample, estimator, eval);
            return std::tuple{simultaneous_band(fit, variance, gamma),
                              pointwise_band(fit, variance, gamma), std::move(fit)};
        });

        bool sim_ok = true, pw_ok = true;
        std::size_t pw_hits = 0;
        double width_sum = 0.0, dev_max = 0.0;
        for (std::size_t k = 0; k < eval.size(); ++k) {
            const double mu = truth[k];
            if (mu < sim.lower[k] || mu > sim.upper[k]) sim_ok = false;
            const bool pw_hit = mu >= pw.lower[k] && mu <= pw.upper[k];
            pw_ok = pw_ok && pw_hit;
            pw_hits += pw_hit ? 1 : 0;
            width_sum += 0.5 * (sim.upper[k] - sim.lower[k]);
            dev_max = std::max(dev_max, std::abs(trend.values[k] - mu));
        }
        sim_covered[r] = sim_ok ? 1 : 0;
        pw_sup_covered[r] = pw_ok ? 1 : 0;
        pw_fraction[r] = static_cast<double>(pw_hits) / static_cast<double>(eval.size());
        halfwidth[r] = width_sum / static_cast<double>(eval.size());
        sup_dev[r] = dev_max;
    }

    CoverageReport report;
    report.setup = make_setup(model, noise, n, p, estimator, replications, seed);
    report.gamma = gamma;
    report.eval_points = eval.size();
    const double m = static_cast<double>(replications);
    double sim_sum = 0.0, pw_sup_sum = 0.0, pw_mean_sum = 0.0, width_sum = 0.0, dev_sum = 0.0;
    for (std::size_t r = 0; r < replications; ++r) {
        sim_sum += sim_covered[r];
        pw_sup_sum += pw_sup_covered[r];
        pw_mean_sum += pw_fraction[r];
        width_sum += halfwidth[r];
        dev_sum += sup_dev[r];
    }
    report.simultaneous_coverage = sim_sum / m;
    report.pointwise_band_sup_coverage = pw_sup_sum / m;
    report.pointwise_band_mean_coverage = pw_mean_sum / m;
    report.mean_halfwidth = width_sum / m;
    report.sup_deviations = std::move(sup_dev);
    report.sup_deviation_mean = dev_sum / m;
    report.sup_deviation_max =
        *std::max_element(report.sup_deviations.begin(), report.sup_deviations.end());
    return report;
}

NormalityReport normality_diagnostic(const GPModel& model, const NoiseModel& noise, std::size_t n,
                                     std::size_t p, const EstimatorConfig& estimator, double t0,
                                     std::size_t replications, std::uint64_t seed) {
    if (n < 1) throw InsufficientDataError("normality diagnostic needs at least one curve");
    check_t0(t0, model.horizon);
    check_replications(replications, 2);

    const double model_variance = model.cov_at(t0, t0);
    if (model_variance == 0.0)
        throw DegenerateModelError("model variance at t0 is zero; the limit law is degenerate");

    const DesignGrid grid = DesignGrid::equispaced(p, model.horizon);
    const GpSampler sampler(model, grid);
    const std::vector<double> eval = {t0};
    const double mu0 = model.mean_at(t0);
    const double root_n = std::sqrt(static_cast<double>(n));

    std::vector<double> z(replications, 0.0);
    for (std::size_t r = 0; r < replications; ++r) {
        const std::uint64_t seed_r = seed + r;
        z[r] = in_replication(r, [&] {
            Matrix paths = sampler.draw(n, derive_seed(seed_r, 0));
            Matrix data = add_noise(paths, noise, derive_seed(seed_r, 1));
            const FunctionalSample sample(std::move(data), grid);
            const TrendEstimate trend = estimate_trend(sample, estimator, eval);
            return root_n * (trend.values[0] - mu0);
        });
    }

    const double m = static_cast<double>(replications);
    double mean = 0.0;
    for (double v : z) mean += v;
    mean /= m;
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : z) {
        const double d = v - mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    m2 /= m;
    m3 /= m;
    m4 /= m;

    NormalityReport report;
    report.setup = make_setup(model, noise, n, p, estimator, replications, seed);
    report.t0 = t0;
    report.model_variance = model_variance;
    report.empirical_variance = m2 * m / (m - 1.0);
    report.variance_ratio = report.empirical_variance / model_variance;
    report.skewness = m3 / std::pow(m2, 1.5);
    report.excess_kurtosis = m4 / (m2 * m2) - 3.0;

    // Kolmogorov-Smirnov distance against the limit N(0, R(t0, t0)).
    std::vector<double> sorted = z;
    std::sort(sorted.begin(), sorted.end());
    const double sd = std::sqrt(model_variance);
    double ks = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double f = normal_cdf(sorted[i] / sd);
        ks = std::max(ks, std::abs(f - static_cast<double>(i + 1) / m));
        ks = std::max(ks, std::abs(f - static_cast<double>(i) / m));
    }
    report.ks_distance = ks;
    return report;
}

RateCheckReport rate_check(const GPModel& model, const NoiseModel& noise, std::size_t n,
                           const std::vector<std::size_t>& p_list,
                           const EstimatorConfig& estimator, double t0,
                           std::size_t replications, std::uint64_t seed) {
    if (n < 1) throw InsufficientDataError("rate check needs at least one curve");
    if (p_list.empty()) throw ValidationError("p_list must not be empty");
    check_t0(t0, model.horizon);
    check_replications(replications, 2);

    const std::vector<double> eval = {t0};
    std::vector<double> variances(p_list.size(), 0.0);
    for (std::size_t q = 0; q < p_list.size(); ++q) {
        const DesignGrid grid = DesignGrid::equispaced(p_list[q], model.horizon);
        const GpSampler sampler(model, grid);
        std::vector<double> estimates(replications, 0.0);
        for (std::size_t r = 0; r < replications; ++r) {
            // Global replication counter, so every simulated dataset in the
            // experiment owns a distinct counter value.
            const std::uint64_t seed_c = seed + q * replications + r;
            estimates[r] = in_replication(q * replications + r, [&] {
                Matrix paths = sampler.draw(n, derive_seed(seed_c, 0));
                Matrix data = add_noise(paths, noise, derive_seed(seed_c, 1));
                const FunctionalSample sample(std::move(data), grid);
                return estimate_trend(sample, estimator, eval).values[0];
            });
        }
        variances[q] = sample_variance(estimates);
    }

    RateCheckReport report;
    report.setup = make_setup(model, noise, n, p_list.front(), estimator, replications, seed);
    report.t0 = t0;
    report.p_list = p_list;
    report.variances = variances;
    const auto [lo, hi] = std::minmax_element(variances.begin(), variances.end());
    if (!(*lo > 0.0))
        throw DegenerateModelError("estimator variance vanished for some grid size");
    report.max_min_ratio = *hi / *lo;
    const auto [plo, phi] = std::minmax_element(p_list.begin(), p_list.end());
    report.nph_predicted_ratio = static_cast<double>(*phi) / static_cast<double>(*plo);
    return report;
}

}  // namespace trendband
