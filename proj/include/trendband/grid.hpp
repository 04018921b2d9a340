#ifndef TRENDBAND_GRID_HPP
#define TRENDBAND_GRID_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace trendband {

/// Dense row-major matrix, curves as rows.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), values_(rows * cols, fill) {}
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> values);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    double operator()(std::size_t i, std::size_t j) const { return values_[i * cols_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return values_[i * cols_ + j]; }
    std::span<const double> row(std::size_t i) const { return {values_.data() + i * cols_, cols_}; }
    std::span<double> row(std::size_t i) { return {values_.data() + i * cols_, cols_}; }
    const std::vector<double>& values() const noexcept { return values_; }
    std::vector<double>& values() noexcept { return values_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> values_;
};

/// Common fixed design t_1 < ... < t_p inside [0, horizon], p >= 2.
class DesignGrid {
public:
    DesignGrid(std::vector<double> points, double horizon);

    const std::vector<double>& points() const noexcept { return points_; }
    double horizon() const noexcept { return horizon_; }
    std::size_t size() const noexcept { return points_.size(); }
    double operator[](std::size_t j) const { return points_[j]; }

    /// t_j = j * horizon / (p + 1), j = 1..p; no point sits on the boundary
    /// and the gap ratio with sentinels 0 and horizon is exactly 1.
    static DesignGrid equispaced(std::size_t p, double horizon);

private:
    std::vector<double> points_;
    double horizon_;
};

/// Gap statistics of a grid under the quasi-uniformity convention with
/// sentinels t_0 = 0 and t_{p+1} = horizon: max_gap runs over all p+1 gaps,
/// min_interior_gap only over the p-1 gaps between actual design points.
struct MeshReport {
    double max_gap = 0.0;
    double min_interior_gap = 0.0;
    double quasi_uniform_ratio = 0.0;
    bool ratio_warning = false;  // heuristic: ratio > 10
};

MeshReport validate_grid(const DesignGrid& grid);

/// Observed data Y_ij: row i = curve i, column j = observation at t_j.
class FunctionalSample {
public:
    FunctionalSample(Matrix data, DesignGrid grid);

    const Matrix& data() const noexcept { return data_; }
    const DesignGrid& grid() const noexcept { return grid_; }
    std::size_t curve_count() const noexcept { return data_.rows(); }
    std::size_t point_count() const noexcept { return data_.cols(); }
    double operator()(std::size_t i, std::size_t j) const { return data_(i, j); }

    /// FNV-1a over dimensions, grid and data bytes; provenance tag for estimates.
    std::uint64_t fingerprint() const;

private:
    Matrix data_;
    DesignGrid grid_;
};

/// Column means (Ybar_1, ..., Ybar_p). Each column is summed in sorted value
/// order so the result is invariant under permutation of the curves.
std::vector<double> cross_sectional_means(const FunctionalSample& sample);

/// Piecewise-linear interpolation of (t_j, means_j) with constant
/// extrapolation on [0, t_1] and [t_p, horizon]. t must lie in [0, horizon].
double interpolant_eval(std::span<const double> means, const DesignGrid& grid, double t);

}  // namespace trendband

#endif
