#include "trendband/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "trendband/errors.hpp"

namespace trendband {

namespace {

// Gauss-Legendre rules on [-1, 1]. Two points integrate cubics exactly,
// three points integrate quintics; the integrands here are kernel pieces
// (degree <= 4) times a linear interpolant, so these suffice for all
// shipped kernels.
struct QuadratureRule {
    const double* nodes;
    const double* weights;
    int count;
};

constexpr double kGauss2Nodes[] = {-0.5773502691896257645091488, 0.5773502691896257645091488};
constexpr double kGauss2Weights[] = {1.0, 1.0};
constexpr double kGauss3Nodes[] = {-0.7745966692414833770358531, 0.0,
                                   0.7745966692414833770358531};
constexpr double kGauss3Weights[] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};

QuadratureRule rule_for(const Kernel& kernel) {
    // Exactness needs 2q - 1 >= poly_degree + 1.
    const int q = (kernel.poly_degree + 3) / 2;
    if (q <= 2) return {kGauss2Nodes, kGauss2Weights, 2};
    return {kGauss3Nodes, kGauss3Weights, 3};
}

void check_eval_grid(std::span<const double> eval_grid, double horizon) {
    if (eval_grid.empty()) throw ValidationError("evaluation grid is empty");
    for (std::size_t k = 0; k < eval_grid.size(); ++k) {
        const double t = eval_grid[k];
        if (!std::isfinite(t) || t < 0.0 || t > horizon)
            throw ValidationError("evaluation point " + std::to_string(k + 1) +
                                  " outside [0, horizon]");
        if (k > 0 && !(t > eval_grid[k - 1]))
            throw ValidationError("evaluation grid must be strictly increasing");
    }
}

// Splits [max(0, t-h), min(T, t+h)] at the design knots and at the kernel's
// polynomial breakpoints, so every piece is polynomial x linear. Returns the
// sorted cut points including both ends.
std::vector<double> convolution_cuts(const DesignGrid& grid, const Kernel& kernel, double t,
                                     double h) {
    const double lo = std::max(0.0, t - h);
    const double hi = std::min(grid.horizon(), t + h);
    std::vector<double> cuts;
    cuts.push_back(lo);
    cuts.push_back(hi);
    for (double b : kernel.breakpoints()) {
        const double u = t - h * b;
        if (u > lo && u < hi) cuts.push_back(u);
    }
    const auto& pts = grid.points();
    auto first = std::upper_bound(pts.begin(), pts.end(), lo);
    for (auto it = first; it != pts.end() && *it < hi; ++it) cuts.push_back(*it);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    return cuts;
}

double clark_value_at(std::span<const double> means, const DesignGrid& grid,
                      const Kernel& kernel, double h, double t) {
    const auto cuts = convolution_cuts(grid, kernel, t, h);
    const QuadratureRule rule = rule_for(kernel);
    double integral = 0.0;
    for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
        const double mid = 0.5 * (cuts[s] + cuts[s + 1]);
        const double half = 0.5 * (cuts[s + 1] - cuts[s]);
        for (int q = 0; q < rule.count; ++q) {
            const double u = mid + half * rule.nodes[q];
            const double k = kernel.value((t - u) / h) / h;
            integral += rule.weights[q] * half * k * interpolant_eval(means, grid, u);
        }
    }
    return integral / boundary_norm(kernel, t, h, grid.horizon());
}

// Same partition and quadrature as clark_value_at, but accumulates the
// contribution of each interpolation basis hat instead of evaluating the
// interpolant, yielding weights with muhat(t) = sum_j w_j * means_j.
std::vector<double> clark_weights_at(const DesignGrid& grid, const Kernel& kernel, double h,
                                     double t) {
    const auto& pts = grid.points();
    const std::size_t p = pts.size();
    const auto cuts = convolution_cuts(grid, kernel, t, h);
    const QuadratureRule rule = rule_for(kernel);
    std::vector<double> weights(p, 0.0);
    for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
        const double mid = 0.5 * (cuts[s] + cuts[s + 1]);
        const double half = 0.5 * (cuts[s + 1] - cuts[s]);
        // The whole piece lies in one segment of the interpolant.
        std::size_t j = 0;
        if (mid > pts.front()) {
            const auto it = std::upper_bound(pts.begin(), pts.end(), mid);
            j = static_cast<std::size_t>(it - pts.begin()) - 1;
        }
        for (int q = 0; q < rule.count; ++q) {
            const double u = mid + half * rule.nodes[q];
            const double mass = rule.weights[q] * half * kernel.value((t - u) / h) / h;
            if (u <= pts.front()) {
                weights.front() += mass;
            } else if (u >= pts.back()) {
                weights.back() += mass;
            } else {
                const double width = pts[j + 1] - pts[j];
                const double frac = (u - pts[j]) / width;
                weights[j] += mass * (1.0 - frac);
                weights[j + 1] += mass * frac;
            }
        }
    }
    const double norm = boundary_norm(kernel, t, h, grid.horizon());
    for (double& w : weights) w /= norm;
    return weights;
}

struct LocalLinearSums {
    double s0 = 0, s1 = 0, s2 = 0;
    double t0 = 0, t1 = 0;
    int positive = 0;
    double det() const { return s0 * s2 - s1 * s1; }
};

// means may be empty when only the design sums are needed.
LocalLinearSums local_linear_sums(std::span<const double> means, const DesignGrid& grid,
                                  const Kernel& kernel, double h, double t) {
    const auto& pts = grid.points();
    LocalLinearSums sums;
    auto first = std::lower_bound(pts.begin(), pts.end(), t - h);
    for (auto it = first; it != pts.end() && *it < t + h; ++it) {
        const double d = *it - t;
        const double w = kernel.value(d / h) / h;
        if (w <= 0.0) continue;
        ++sums.positive;
        sums.s0 += w;
        sums.s1 += w * d;
        sums.s2 += w * d * d;
        if (!means.empty()) {
            const double y = means[static_cast<std::size_t>(it - pts.begin())];
            sums.t0 += w * y;
            sums.t1 += w * d * y;
        }
    }
    return sums;
}

// Relative guard against collinear windows.
bool window_degenerate(const LocalLinearSums& sums) {
    return sums.positive < 2 || sums.det() <= 1e-12 * (sums.s0 * sums.s2 + sums.s1 * sums.s1);
}

std::vector<double> local_linear_weights_at(const DesignGrid& grid, const Kernel& kernel,
                                            double h, double t) {
    const auto& pts = grid.points();
    const LocalLinearSums sums = local_linear_sums({}, grid, kernel, h, t);
    if (window_degenerate(sums))
        throw DegenerateWindowError("local linear window is degenerate", t);
    std::vector<double> weights(pts.size(), 0.0);
    const double det = sums.det();
    auto first = std::lower_bound(pts.begin(), pts.end(), t - h);
    for (auto it = first; it != pts.end() && *it < t + h; ++it) {
        const double d = *it - t;
        const double w = kernel.value(d / h) / h;
        if (w <= 0.0) continue;
        weights[static_cast<std::size_t>(it - pts.begin())] = w * (sums.s2 - sums.s1 * d) / det;
    }
    return weights;
}

}  // namespace

TrendMethod method_from_name(std::string_view name) {
    if (name == "clark") return TrendMethod::clark;
    if (name == "loclin" || name == "local_linear") return TrendMethod::local_linear;
    throw ValidationError("unknown method '" + std::string(name) +
                          "'; expected clark or loclin");
}

std::string method_name(TrendMethod method) {
    return method == TrendMethod::clark ? "clark" : "loclin";
}

double resolve_bandwidth(const EstimatorConfig& config, double horizon, std::size_t n) {
    if (config.bandwidth) {
        const double h = *config.bandwidth;
        if (!(h > 0.0)) throw InvalidBandwidthError("bandwidth must be positive");
        return h;
    }
    const double nn = static_cast<double>(n < 3 ? 3 : n);
    return horizon * std::pow(static_cast<double>(n), -0.25) / std::sqrt(std::log(nn));
}

std::vector<double> default_eval_grid(double horizon, std::size_t count) {
    if (count < 2) throw ValidationError("evaluation grid needs at least 2 points");
    std::vector<double> grid(count);
    for (std::size_t k = 0; k < count; ++k)
        grid[k] = horizon * static_cast<double>(k) / static_cast<double>(count - 1);
    return grid;
}

TrendEstimate clark_estimate(const FunctionalSample& sample, const EstimatorConfig& config,
                             std::span<const double> eval_grid) {
    const double horizon = sample.grid().horizon();
    check_eval_grid(eval_grid, horizon);
    const double h = resolve_bandwidth(config, horizon, sample.curve_count());
    if (h > horizon)
        throw InvalidBandwidthError("bandwidth exceeds the horizon; boundary mass would vanish");

    const auto means = cross_sectional_means(sample);
    TrendEstimate estimate;
    estimate.eval_grid.assign(eval_grid.begin(), eval_grid.end());
    estimate.values.resize(eval_grid.size());
    for (std::size_t k = 0; k < eval_grid.size(); ++k)
        estimate.values[k] = clark_value_at(means, sample.grid(), config.kernel, h, eval_grid[k]);
    estimate.config = config;
    estimate.config.method = TrendMethod::clark;
    estimate.bandwidth = h;
    estimate.n = sample.curve_count();
    estimate.sample_fingerprint = sample.fingerprint();
    return estimate;
}

TrendEstimate local_linear_estimate(const FunctionalSample& sample, const EstimatorConfig& config,
                                    std::span<const double> eval_grid) {
    const double horizon = sample.grid().horizon();
    check_eval_grid(eval_grid, horizon);
    const double h = resolve_bandwidth(config, horizon, sample.curve_count());

    const auto means = cross_sectional_means(sample);
    TrendEstimate estimate;
    estimate.eval_grid.assign(eval_grid.begin(), eval_grid.end());
    estimate.values.resize(eval_grid.size());
    for (std::size_t k = 0; k < eval_grid.size(); ++k) {
        const double t = eval_grid[k];
        const LocalLinearSums sums =
            local_linear_sums(means, sample.grid(), config.kernel, h, t);
        if (window_degenerate(sums))
            throw DegenerateWindowError("local linear window is degenerate", t);
        estimate.values[k] = (sums.s2 * sums.t0 - sums.s1 * sums.t1) / sums.det();
    }
    estimate.config = config;
    estimate.config.method = TrendMethod::local_linear;
    estimate.bandwidth = h;
    estimate.n = sample.curve_count();
    estimate.sample_fingerprint = sample.fingerprint();
    return estimate;
}

TrendEstimate estimate_trend(const FunctionalSample& sample, const EstimatorConfig& config,
                             std::span<const double> eval_grid) {
    return config.method == TrendMethod::clark ? clark_estimate(sample, config, eval_grid)
                                               : local_linear_estimate(sample, config, eval_grid);
}

std::vector<double> effective_weights(const EstimatorConfig& config, const DesignGrid& grid,
                                      double t) {
    if (!config.bandwidth)
        throw InvalidBandwidthError(
            "effective_weights needs an explicit bandwidth; resolve the automatic rule first");
    const double h = *config.bandwidth;
    if (!(h > 0.0)) throw InvalidBandwidthError("bandwidth must be positive");
    if (!(t >= 0.0) || !(t <= grid.horizon()))
        throw std::domain_error("weights requested outside [0, horizon]");
    if (config.method == TrendMethod::clark) {
        if (h > grid.horizon())
            throw InvalidBandwidthError("bandwidth exceeds the horizon; boundary mass would vanish");
        return clark_weights_at(grid, config.kernel, h, t);
    }
    return local_linear_weights_at(grid, config.kernel, h, t);
}

}  // namespace trendband
