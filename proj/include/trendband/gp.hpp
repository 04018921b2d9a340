#ifndef TRENDBAND_GP_HPP
#define TRENDBAND_GP_HPP

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "trendband/grid.hpp"

namespace trendband {

enum class MeanKind { zero, sine, quadratic };

/// Trend presets: 0, sin(2 pi t / T), or a + b t + c t^2. All have two
/// bounded derivatives on [0, T].
struct MeanFunction {
    MeanKind kind = MeanKind::zero;
    double a = 0.0, b = 0.0, c = 0.0;  // quadratic coefficients

    double operator()(double t, double horizon) const;

    static MeanFunction zero() { return {}; }
    static MeanFunction sine() { return {MeanKind::sine}; }
    static MeanFunction quadratic(double a, double b, double c) {
        return {MeanKind::quadratic, a, b, c};
    }
};

enum class CovKind { brownian, brownian_bridge, ornstein_uhlenbeck, squared_exponential };

/// scale is in the units of X (variance scales with scale^2); range is the
/// correlation length of the stationary kinds. scale = 0 yields the
/// degenerate deterministic model, constructible for diagnostics only.
struct CovarianceFunction {
    CovKind kind = CovKind::ornstein_uhlenbeck;
    double scale = 1.0;
    double range = 0.5;

    double operator()(double s, double t, double horizon) const;

    static CovarianceFunction brownian(double scale = 1.0);
    static CovarianceFunction brownian_bridge(double scale = 1.0);
    static CovarianceFunction ornstein_uhlenbeck(double scale = 1.0, double range = 0.5);
    static CovarianceFunction squared_exponential(double scale = 1.0, double range = 0.5);
};

/// Documentation tag for the sample-path regularity class the preset targets.
struct PathRegularity {
    enum class Kind { variation_bounded, holder };
    Kind kind = Kind::holder;
    double holder_exponent = 0.5;
};

struct GPModel {
    MeanFunction mean;
    CovarianceFunction covariance;
    PathRegularity regularity;  // defaulted from the covariance preset
    double horizon = 1.0;

    GPModel() = default;
    GPModel(MeanFunction mean, CovarianceFunction covariance, double horizon = 1.0);

    double mean_at(double t) const { return mean(t, horizon); }
    double cov_at(double s, double t) const { return covariance(s, t, horizon); }
};

std::string cov_kind_name(CovKind kind);
std::string mean_kind_name(MeanKind kind);

struct NoiseModel {
    enum class Kind { iid, ar1 };
    double sigma = 0.0;    // marginal standard deviation in both kinds
    Kind kind = Kind::iid;
    double ar_coeff = 0.0;  // lag-1 correlation, |ar_coeff| < 1

    static NoiseModel none() { return {}; }
    static NoiseModel iid(double sigma) { return {sigma, Kind::iid, 0.0}; }
    static NoiseModel ar1(double sigma, double rho);
};

/// mt19937_64 with explicit uniform and Box-Muller normal draws, so streams
/// do not depend on the standard library's distribution implementations.
class GaussianSampler {
public:
    explicit GaussianSampler(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on (0, 1), strictly inside.
    double uniform();
    double normal();

private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// Decorrelated stream seed: splitmix64 finalizer of seed + (stream+1) * odd
/// golden-ratio stride. Used to split one user seed into process/noise
/// streams and per-replication streams.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// Factors the grid covariance once (Cholesky with jitter escalating from
/// 1e-12 to 1e-8 on the diagonal before failing) and draws any number of
/// independent sample paths from it.
class GpSampler {
public:
    GpSampler(const GPModel& model, const DesignGrid& grid);

    /// n rows of X_i(t_j); consumes exactly n * p normals from a fresh
    /// GaussianSampler(seed), so identical seeds give identical output.
    Matrix draw(std::size_t n, std::uint64_t seed) const;

    double jitter_used() const noexcept { return jitter_; }

private:
    std::vector<double> mean_;
    std::vector<double> chol_;  // lower triangular, row-major p x p
    std::size_t p_ = 0;
    double jitter_ = 0.0;
};

/// One-shot convenience wrapper over GpSampler.
Matrix sample_gp(const GPModel& model, const DesignGrid& grid, std::size_t n, std::uint64_t seed);

/// Adds measurement error to every entry: iid N(0, sigma^2), or per-row
/// stationary AR(1) with marginal variance sigma^2. sigma = 0 returns the
/// input unchanged.
Matrix add_noise(const Matrix& paths, const NoiseModel& noise, std::uint64_t seed);

}  // namespace trendband

#endif
