#include "trendband/gp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "trendband/errors.hpp"

namespace trendband {

double MeanFunction::operator()(double t, double horizon) const {
    switch (kind) {
        case MeanKind::zero: return 0.0;
        case MeanKind::sine: return std::sin(2.0 * std::numbers::pi * t / horizon);
        case MeanKind::quadratic: return a + b * t + c * t * t;
    }
    return 0.0;
}

double CovarianceFunction::operator()(double s, double t, double horizon) const {
    const double s2 = scale * scale;
    switch (kind) {
        case CovKind::brownian: return s2 * std::min(s, t);
        case CovKind::brownian_bridge: return s2 * (std::min(s, t) - s * t / horizon);
        case CovKind::ornstein_uhlenbeck: return s2 * std::exp(-std::abs(s - t) / range);
        case CovKind::squared_exponential: {
            const double d = s - t;
            return s2 * std::exp(-d * d / (2.0 * range * range));
        }
    }
    return 0.0;
}

namespace {

void check_scale(double scale) {
    if (!(scale >= 0.0)) throw ValidationError("covariance scale must be non-negative");
}

void check_range(double range) {
    if (!(range > 0.0)) throw ValidationError("covariance range must be positive");
}

}  // namespace

CovarianceFunction CovarianceFunction::brownian(double scale) {
    check_scale(scale);
    return {CovKind::brownian, scale, 0.0};
}

CovarianceFunction CovarianceFunction::brownian_bridge(double scale) {
    check_scale(scale);
    return {CovKind::brownian_bridge, scale, 0.0};
}

CovarianceFunction CovarianceFunction::ornstein_uhlenbeck(double scale, double range) {
    check_scale(scale);
    check_range(range);
    return {CovKind::ornstein_uhlenbeck, scale, range};
}

CovarianceFunction CovarianceFunction::squared_exponential(double scale, double range) {
    check_scale(scale);
    check_range(range);
    return {CovKind::squared_exponential, scale, range};
}

GPModel::GPModel(MeanFunction mean_fn, CovarianceFunction cov_fn, double horizon_len)
    : mean(mean_fn), covariance(cov_fn), horizon(horizon_len) {
    if (!(horizon > 0.0) || !std::isfinite(horizon))
        throw ValidationError("horizon must be positive and finite");
    // Squared-exponential paths are smooth; the other presets are
    // Holder-continuous of order just under 1/2 and not of bounded variation.
    if (covariance.kind == CovKind::squared_exponential)
        regularity = {PathRegularity::Kind::variation_bounded, 1.0};
    else
        regularity = {PathRegularity::Kind::holder, 0.5};
}

std::string cov_kind_name(CovKind kind) {
    switch (kind) {
        case CovKind::brownian: return "brownian";
        case CovKind::brownian_bridge: return "bridge";
        case CovKind::ornstein_uhlenbeck: return "ou";
        case CovKind::squared_exponential: return "sqexp";
    }
    return "unknown";
}

std::string mean_kind_name(MeanKind kind) {
    switch (kind) {
        case MeanKind::zero: return "zero";
        case MeanKind::sine: return "sine";
        case MeanKind::quadratic: return "quadratic";
    }
    return "unknown";
}

NoiseModel NoiseModel::ar1(double sigma, double rho) {
    if (!(sigma >= 0.0)) throw ValidationError("noise sigma must be non-negative");
    if (!(std::abs(rho) < 1.0))
        throw ValidationError("AR(1) coefficient must satisfy |rho| < 1");
    return {sigma, Kind::ar1, rho};
}

double GaussianSampler::uniform() {
    // 53 random bits mapped strictly inside (0, 1).
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double GaussianSampler::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double theta = 2.0 * std::numbers::pi * uniform();
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + (stream + 1) * 0x9E3779B97F4A7C15ULL;
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
}

namespace {

/// In-place lower Cholesky of the packed row-major matrix; returns false on a
/// non-positive pivot instead of throwing so jitter escalation can retry.
bool cholesky_lower(std::vector<double>& a, std::size_t p) {
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double sum = a[i * p + j];
            for (std::size_t k = 0; k < j; ++k) sum -= a[i * p + k] * a[j * p + k];
            if (i == j) {
                if (!(sum > 0.0)) return false;
                a[i * p + i] = std::sqrt(sum);
            } else {
                a[i * p + j] = sum / a[j * p + j];
            }
        }
        std::fill(a.begin() + static_cast<std::ptrdiff_t>(i * p + i + 1),
                  a.begin() + static_cast<std::ptrdiff_t>((i + 1) * p), 0.0);
    }
    return true;
}

}  // namespace

GpSampler::GpSampler(const GPModel& model, const DesignGrid& grid) : p_(grid.size()) {
    mean_.resize(p_);
    for (std::size_t j = 0; j < p_; ++j) mean_[j] = model.mean_at(grid[j]);

    std::vector<double> cov(p_ * p_);
    for (std::size_t i = 0; i < p_; ++i)
        for (std::size_t j = 0; j <= i; ++j)
            cov[i * p_ + j] = cov[j * p_ + i] = model.cov_at(grid[i], grid[j]);

    // The smooth presets are numerically rank-deficient on dense grids; an
    // absolute diagonal jitter restores positive pivots without visibly
    // perturbing the paths.
    static constexpr double jitters[] = {0.0, 1e-12, 1e-11, 1e-10, 1e-9, 1e-8};
    for (double delta : jitters) {
        chol_ = cov;
        for (std::size_t j = 0; j < p_; ++j) chol_[j * p_ + j] += delta;
        if (cholesky_lower(chol_, p_)) {
            jitter_ = delta;
            return;
        }
    }
    throw NotPsdError("covariance matrix is not positive definite on this grid");
}

Matrix GpSampler::draw(std::size_t n, std::uint64_t seed) const {
    if (n == 0) throw ValidationError("path count must be at least 1");
    GaussianSampler sampler(seed);
    Matrix paths(n, p_);
    std::vector<double> z(p_);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < p_; ++j) z[j] = sampler.normal();
        auto row = paths.row(i);
        for (std::size_t j = 0; j < p_; ++j) {
            double value = mean_[j];
            const double* lrow = chol_.data() + j * p_;
            for (std::size_t k = 0; k <= j; ++k) value += lrow[k] * z[k];
            row[j] = value;
        }
    }
    return paths;
}

Matrix sample_gp(const GPModel& model, const DesignGrid& grid, std::size_t n,
                 std::uint64_t seed) {
    return GpSampler(model, grid).draw(n, seed);
}

Matrix add_noise(const Matrix& paths, const NoiseModel& noise, std::uint64_t seed) {
    if (!(noise.sigma >= 0.0)) throw ValidationError("noise sigma must be non-negative");
    if (noise.kind == NoiseModel::Kind::ar1 && !(std::abs(noise.ar_coeff) < 1.0))
        throw ValidationError("AR(1) coefficient must satisfy |rho| < 1");
    if (noise.sigma == 0.0) return paths;

    GaussianSampler sampler(seed);
    Matrix noisy = paths;
    const std::size_t p = paths.cols();
    if (noise.kind == NoiseModel::Kind::iid) {
        for (double& value : noisy.values()) value += noise.sigma * sampler.normal();
        return noisy;
    }
    // Stationary AR(1) per curve: marginal variance sigma^2 at every j.
    const double rho = noise.ar_coeff;
    const double innovation = noise.sigma * std::sqrt(1.0 - rho * rho);
    for (std::size_t i = 0; i < paths.rows(); ++i) {
        auto row = noisy.row(i);
        double e = noise.sigma * sampler.normal();
        row[0] += e;
        for (std::size_t j = 1; j < p; ++j) {
            e = rho * e + innovation * sampler.normal();
            row[j] += e;
        }
    }
    return noisy;
}

}  // namespace trendband
