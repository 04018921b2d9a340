#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstddef>
#include <numbers>
#include <set>
#include <vector>

#include "trendband/errors.hpp"
#include "trendband/gp.hpp"
#include "trendband/grid.hpp"

using namespace trendband;

namespace {

double grid_variance(const Matrix& paths, std::size_t j) {
    long double mean = 0.0L;
    for (std::size_t i = 0; i < paths.rows(); ++i) mean += paths(i, j);
    mean /= static_cast<long double>(paths.rows());
    long double ss = 0.0L;
    for (std::size_t i = 0; i < paths.rows(); ++i) {
        const long double d = paths(i, j) - mean;
        ss += d * d;
    }
    return static_cast<double>(ss / static_cast<long double>(paths.rows() - 1));
}

}  // namespace

TEST_CASE("mean presets evaluate their closed forms") {
    CHECK(MeanFunction::zero()(0.37, 1.0) == 0.0);
    CHECK(MeanFunction::sine()(0.25, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(MeanFunction::sine()(0.5, 2.0) ==
          doctest::Approx(std::sin(std::numbers::pi / 2.0)).epsilon(1e-14));
    const auto quad = MeanFunction::quadratic(1.0, -2.0, 3.0);
    CHECK(quad(0.5, 1.0) == doctest::Approx(1.0 - 1.0 + 0.75).epsilon(1e-14));
}

TEST_CASE("covariance presets evaluate their closed forms") {
    const auto bm = CovarianceFunction::brownian(2.0);
    CHECK(bm(0.3, 0.7, 1.0) == doctest::Approx(4.0 * 0.3).epsilon(1e-14));
    CHECK(bm(0.7, 0.3, 1.0) == bm(0.3, 0.7, 1.0));

    const auto bridge = CovarianceFunction::brownian_bridge(1.0);
    CHECK(bridge(0.0, 0.0, 1.0) == 0.0);
    CHECK(std::abs(bridge(1.0, 1.0, 1.0)) <= 1e-15);
    CHECK(bridge(0.5, 0.5, 1.0) == doctest::Approx(0.25).epsilon(1e-14));

    const auto ou = CovarianceFunction::ornstein_uhlenbeck(1.5, 0.5);
    CHECK(ou(0.2, 0.2, 1.0) == doctest::Approx(2.25).epsilon(1e-14));
    CHECK(ou(0.0, 0.5, 1.0) == doctest::Approx(2.25 * std::exp(-1.0)).epsilon(1e-14));

    const auto se = CovarianceFunction::squared_exponential(1.0, 0.2);
    CHECK(se(0.4, 0.4, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(se(0.0, 0.2, 1.0) == doctest::Approx(std::exp(-0.5)).epsilon(1e-14));
}

TEST_CASE("model construction validates parameters") {
    CHECK_THROWS_AS(CovarianceFunction::brownian(-1.0), ValidationError);
    CHECK_THROWS_AS(CovarianceFunction::ornstein_uhlenbeck(1.0, 0.0), ValidationError);
    CHECK_THROWS_AS(CovarianceFunction::squared_exponential(1.0, -0.3), ValidationError);
    CHECK_NOTHROW(CovarianceFunction::brownian(0.0));  // degenerate but constructible

    CHECK_THROWS_AS(GPModel(MeanFunction::zero(), CovarianceFunction::brownian(1.0), 0.0),
                    ValidationError);
    CHECK_THROWS_AS(GPModel(MeanFunction::zero(), CovarianceFunction::brownian(1.0), -2.0),
                    ValidationError);

    CHECK_THROWS_AS(NoiseModel::ar1(0.5, 1.0), ValidationError);
    CHECK_THROWS_AS(NoiseModel::ar1(0.5, -1.2), ValidationError);
    CHECK_THROWS_AS(NoiseModel::ar1(-0.1, 0.5), ValidationError);
    CHECK_NOTHROW(NoiseModel::ar1(0.5, 0.0));
}

TEST_CASE("regularity tags follow the covariance preset") {
    const GPModel rough(MeanFunction::zero(), CovarianceFunction::ornstein_uhlenbeck(1.0, 0.5),
                        1.0);
    CHECK(rough.regularity.kind == PathRegularity::Kind::holder);
    CHECK(rough.regularity.holder_exponent == doctest::Approx(0.5));
    const GPModel smooth(MeanFunction::zero(),
                         CovarianceFunction::squared_exponential(1.0, 0.5), 1.0);
    CHECK(smooth.regularity.kind == PathRegularity::Kind::variation_bounded);
}

TEST_CASE("preset names are stable identifiers") {
    CHECK(cov_kind_name(CovKind::brownian) == "brownian");
    CHECK(cov_kind_name(CovKind::brownian_bridge) == "bridge");
    CHECK(cov_kind_name(CovKind::ornstein_uhlenbeck) == "ou");
    CHECK(cov_kind_name(CovKind::squared_exponential) == "sqexp");
    CHECK(mean_kind_name(MeanKind::zero) == "zero");
    CHECK(mean_kind_name(MeanKind::sine) == "sine");
    CHECK(mean_kind_name(MeanKind::quadratic) == "quadratic");
}

TEST_CASE("the sampler's uniforms stay strictly inside the unit interval") {
    GaussianSampler rng(1);
    for (int k = 0; k < 100000; ++k) {
        const double u = rng.uniform();
        CHECK(u > 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("the sampler's normals have the right first two moments") {
    GaussianSampler rng(2);
    const std::size_t m = 200000;
    long double sum = 0.0L, ss = 0.0L;
    for (std::size_t k = 0; k < m; ++k) {
        const double z = rng.normal();
        sum += z;
        ss += z * z;
    }
    const double mean = static_cast<double>(sum / m);
    const double var = static_cast<double>(ss / m) - mean * mean;
    CHECK(std::abs(mean) <= 0.01);
    CHECK(std::abs(var - 1.0) <= 0.015);
}

TEST_CASE("derived stream seeds are distinct and deterministic") {
    std::set<std::uint64_t> seen;
    for (std::uint64_t stream = 0; stream < 16; ++stream) {
        seen.insert(derive_seed(42, stream));
        CHECK(derive_seed(42, stream) == derive_seed(42, stream));
    }
    CHECK(seen.size() == 16);
    CHECK(derive_seed(42, 0) != derive_seed(43, 0));
}

TEST_CASE("identical seeds reproduce identical paths") {
    const DesignGrid grid = DesignGrid::equispaced(25, 1.0);
    const GPModel model(MeanFunction::sine(), CovarianceFunction::ornstein_uhlenbeck(1.0, 0.5),
                        1.0);
    const Matrix a = sample_gp(model, grid, 5, 99);
    const Matrix b = sample_gp(model, grid, 5, 99);
    const Matrix c = sample_gp(model, grid, 5, 100);
    CHECK(a.values() == b.values());
    CHECK(a.values() != c.values());
}

TEST_CASE("empty draws are rejected") {
    const DesignGrid grid = DesignGrid::equispaced(10, 1.0);
    const GPModel model(MeanFunction::zero(), CovarianceFunction::brownian(1.0), 1.0);
    CHECK_THROWS_AS(sample_gp(model, grid, 0, 1), ValidationError);
}

TEST_CASE("sampled diffusion paths match their marginal variances") {
    const DesignGrid grid = DesignGrid::equispaced(9, 1.0);  // t = 0.1, ..., 0.9
    const GPModel model(MeanFunction::zero(), CovarianceFunction::brownian(1.0), 1.0);
    const Matrix paths = sample_gp(model, grid, 10000, 271828);
    for (std::size_t j = 0; j < 9; ++j) {
        const double t = grid[j];
        if (t < 0.2) continue;  // tiny variances carry huge relative noise
        CHECK(grid_variance(paths, j) == doctest::Approx(t).epsilon(0.05));
    }
    // Zero-mean: each column mean within 4 standard errors.
    for (std::size_t j = 0; j < 9; ++j) {
        long double mean = 0.0L;
        for (std::size_t i = 0; i < paths.rows(); ++i) mean += paths(i, j);
        mean /= static_cast<long double>(paths.rows());
        CHECK(std::abs(static_cast<double>(mean)) <= 4.0 * std::sqrt(grid[j] / 10000.0));
    }
}

TEST_CASE("the mean preset shifts every sampled path") {
    const DesignGrid grid = DesignGrid::equispaced(15, 1.0);
    const GPModel centered(MeanFunction::zero(), CovarianceFunction::ornstein_uhlenbeck(1.0, 0.5),
                           1.0);
    const GPModel shifted(MeanFunction::sine(), CovarianceFunction::ornstein_uhlenbeck(1.0, 0.5),
                          1.0);
    const Matrix a = sample_gp(centered, grid, 3, 7);
    const Matrix b = sample_gp(shifted, grid, 3, 7);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 15; ++j)
            CHECK(std::abs(b(i, j) - a(i, j) - shifted.mean_at(grid[j])) <= 1e-12);
}

TEST_CASE("bridge paths are pinned down near the endpoints") {
    const DesignGrid grid = DesignGrid::equispaced(19, 1.0);  // t = 0.05, ..., 0.95
    const GPModel model(MeanFunction::zero(), CovarianceFunction::brownian_bridge(1.0), 1.0);
    const Matrix paths = sample_gp(model, grid, 4000, 5150);
    const double at_start = grid_variance(paths, 0);
    const double at_mid = grid_variance(paths, 9);
    const double at_end = grid_variance(paths, 18);
    CHECK(at_start < at_mid);
    CHECK(at_end < at_mid);
    CHECK(at_mid == doctest::Approx(0.25).epsilon(0.15));
}

TEST_CASE("factorization jitter stays within the escalation ladder") {
    const DesignGrid coarse = DesignGrid::equispaced(30, 1.0);
    const GPModel rough(MeanFunction::zero(), CovarianceFunction::ornstein_uhlenbeck(1.0, 0.5),
                        1.0);
    const GpSampler well_conditioned(rough, coarse);
    CHECK(well_conditioned.jitter_used() == 0.0);

    // Smooth kernels on dense grids are numerically rank-deficient and need
    // a nonzero diagonal nudge, but never more than 1e-8.
    const DesignGrid dense = DesignGrid::equispaced(150, 1.0);
    const GPModel smooth(MeanFunction::zero(),
                         CovarianceFunction::squared_exponential(1.0, 0.5), 1.0);
    const GpSampler nudged(smooth, dense);
    CHECK(nudged.jitter_used() <= 1e-8);
    CHECK_NOTHROW(nudged.draw(3, 1));
}

TEST_CASE("zero noise leaves the data untouched") {
    const DesignGrid grid = DesignGrid::equispaced(12, 1.0);
    const GPModel model(MeanFunction::zero(), CovarianceFunction::brownian(1.0), 1.0);
    const Matrix paths = sample_gp(model, grid, 4, 10);
    const Matrix same = add_noise(paths, NoiseModel::none(), 333);
    CHECK(same.values() == paths.values());
    const Matrix also_same = add_noise(paths, NoiseModel::iid(0.0), 333);
    CHECK(also_same.values() == paths.values());
}

TEST_CASE("iid noise has the requested marginal variance") {
    const Matrix flat(1000, 100, 0.0);
    const Matrix noisy = add_noise(flat, NoiseModel::iid(0.5), 2024);
    long double ss = 0.0L;
    for (double v : noisy.values()) ss += v * v;
    const double var = static_cast<double>(ss / static_cast<long double>(noisy.values().size()));
    CHECK(var == doctest::Approx(0.25).epsilon(0.03));
}

TEST_CASE("autoregressive noise matches its lag-one correlation and variance") {
    const Matrix flat(400, 250, 0.0);
    const Matrix noisy = add_noise(flat, NoiseModel::ar1(1.0, 0.6), 4711);
    long double ss = 0.0L, lag = 0.0L;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < noisy.rows(); ++i) {
        for (std::size_t j = 0; j < noisy.cols(); ++j) {
            ss += noisy(i, j) * noisy(i, j);
            if (j + 1 < noisy.cols()) {
                lag += noisy(i, j) * noisy(i, j + 1);
                ++pairs;
            }
        }
    }
    const double var = static_cast<double>(ss / static_cast<long double>(noisy.values().size()));
    const double rho = static_cast<double>(lag / static_cast<long double>(pairs)) / var;
    CHECK(var == doctest::Approx(1.0).epsilon(0.03));
    CHECK(std::abs(rho - 0.6) <= 0.03);
}

TEST_CASE("different noise streams are independent of the path stream") {
    const DesignGrid grid = DesignGrid::equispaced(20, 1.0);
    const GPModel model(MeanFunction::zero(), CovarianceFunction::ornstein_uhlenbeck(1.0, 0.5),
                        1.0);
    const Matrix paths = sample_gp(model, grid, 3, derive_seed(5, 0));
    const Matrix noisy_a = add_noise(paths, NoiseModel::iid(0.3), derive_seed(5, 1));
    const Matrix noisy_b = add_noise(paths, NoiseModel::iid(0.3), derive_seed(5, 1));
    const Matrix noisy_c = add_noise(paths, NoiseModel::iid(0.3), derive_seed(6, 1));
    CHECK(noisy_a.values() == noisy_b.values());
    CHECK(noisy_a.values() != noisy_c.values());
}
