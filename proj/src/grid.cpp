#include "trendband/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>
#include <string>

#include "trendband/errors.hpp"

namespace trendband {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
    if (values_.size() != rows * cols)
        throw ValidationError("matrix storage size does not match dimensions");
}

DesignGrid::DesignGrid(std::vector<double> points, double horizon)
    : points_(std::move(points)), horizon_(horizon) {
    if (!(horizon_ > 0.0)) throw InvalidGridError("horizon must be positive");
    if (points_.size() < 2) throw InvalidGridError("grid needs at least 2 points");
    for (std::size_t j = 0; j < points_.size(); ++j) {
        if (!std::isfinite(points_[j]) || points_[j] < 0.0 || points_[j] > horizon_)
            throw InvalidGridError("grid point " + std::to_string(j + 1) +
                                   " outside [0, horizon]");
        if (j > 0 && !(points_[j] > points_[j - 1]))
            throw InvalidGridError("grid points must be strictly increasing (violated at index " +
                                   std::to_string(j + 1) + ")");
    }
}

DesignGrid DesignGrid::equispaced(std::size_t p, double horizon) {
    if (p < 2) throw InvalidGridError("grid needs at least 2 points");
    std::vector<double> pts(p);
    for (std::size_t j = 0; j < p; ++j)
        pts[j] = static_cast<double>(j + 1) * horizon / static_cast<double>(p + 1);
    return DesignGrid(std::move(pts), horizon);
}

MeshReport validate_grid(const DesignGrid& grid) {
    const auto& t = grid.points();
    const std::size_t p = t.size();
    MeshReport report;
    // Sentinels t_0 = 0 and t_{p+1} = horizon, so boundary gaps count toward
    // the maximum but not the minimum.
    report.max_gap = t.front() - 0.0;
    report.max_gap = std::max(report.max_gap, grid.horizon() - t.back());
    report.min_interior_gap = t[1] - t[0];
    for (std::size_t j = 0; j + 1 < p; ++j) {
        const double gap = t[j + 1] - t[j];
        report.max_gap = std::max(report.max_gap, gap);
        report.min_interior_gap = std::min(report.min_interior_gap, gap);
    }
    report.quasi_uniform_ratio = report.max_gap / report.min_interior_gap;
    report.ratio_warning = report.quasi_uniform_ratio > 10.0;
    return report;
}

FunctionalSample::FunctionalSample(Matrix data, DesignGrid grid)
    : data_(std::move(data)), grid_(std::move(grid)) {
    if (data_.rows() < 1) throw ValidationError("sample needs at least 1 curve");
    if (data_.cols() != grid_.size())
        throw ValidationError("sample has " + std::to_string(data_.cols()) +
                              " columns but the grid has " + std::to_string(grid_.size()) +
                              " points");
    for (double v : data_.values())
        if (!std::isfinite(v)) throw ValidationError("sample contains a non-finite value");
}

std::uint64_t FunctionalSample::fingerprint() const {
    std::uint64_t hash = 1469598103934665603ull;
    auto mix = [&hash](const void* bytes, std::size_t size) {
        const auto* b = static_cast<const unsigned char*>(bytes);
        for (std::size_t i = 0; i < size; ++i) {
            hash ^= b[i];
            hash *= 1099511628211ull;
        }
    };
    const std::uint64_t dims[2] = {data_.rows(), data_.cols()};
    mix(dims, sizeof dims);
    const double horizon = grid_.horizon();
    mix(&horizon, sizeof horizon);
    mix(grid_.points().data(), grid_.size() * sizeof(double));
    mix(data_.values().data(), data_.values().size() * sizeof(double));
    return hash;
}

std::vector<double> cross_sectional_means(const FunctionalSample& sample) {
    const std::size_t n = sample.curve_count();
    const std::size_t p = sample.point_count();
    std::vector<double> means(p);
    std::vector<double> column(n);
    for (std::size_t j = 0; j < p; ++j) {
        for (std::size_t i = 0; i < n; ++i) column[i] = sample(i, j);
        // Summing in sorted order makes the mean independent of curve order.
        std::sort(column.begin(), column.end());
        means[j] = std::accumulate(column.begin(), column.end(), 0.0) / static_cast<double>(n);
    }
    return means;
}

double interpolant_eval(std::span<const double> means, const DesignGrid& grid, double t) {
    if (!(t >= 0.0) || !(t <= grid.horizon()))
        throw std::domain_error("interpolant evaluated outside [0, horizon]");
    if (means.size() != grid.size())
        throw GridMismatchError("means length does not match the grid");
    const auto& pts = grid.points();
    if (t <= pts.front()) return means.front();
    if (t >= pts.back()) return means.back();
    const auto it = std::upper_bound(pts.begin(), pts.end(), t);
    const std::size_t j = static_cast<std::size_t>(it - pts.begin()) - 1;
    const double width = pts[j + 1] - pts[j];
    const double w = (t - pts[j]) / width;
    return means[j] * (1.0 - w) + means[j + 1] * w;
}

}  // namespace trendband
