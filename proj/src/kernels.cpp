#include "trendband/kernels.hpp"

#include <array>
#include <cmath>
#include <string>

#include "trendband/errors.hpp"

namespace trendband {

namespace {

constexpr std::array<double, 2> kSinglePiece = {-1.0, 1.0};
constexpr std::array<double, 3> kTriangularPieces = {-1.0, 0.0, 1.0};

}  // namespace

double Kernel::value(double u) const {
    const double a = std::abs(u);
    if (a >= 1.0) return 0.0;
    switch (id) {
        case KernelId::epanechnikov:
            return 0.75 * (1.0 - u * u);
        case KernelId::triangular:
            return 1.0 - a;
        case KernelId::biweight: {
            const double w = 1.0 - u * u;
            return 0.9375 * w * w;
        }
    }
    return 0.0;
}

double Kernel::cdf(double u) const {
    if (u <= -1.0) return 0.0;
    if (u >= 1.0) return 1.0;
    double f = 0.0;
    switch (id) {
        case KernelId::epanechnikov:
            f = 0.25 * (2.0 + 3.0 * u - u * u * u);
            break;
        case KernelId::triangular:
            f = u <= 0.0 ? 0.5 * (1.0 + u) * (1.0 + u) : 1.0 - 0.5 * (1.0 - u) * (1.0 - u);
            break;
        case KernelId::biweight:
            f = 0.5 + 0.9375 * (u - 2.0 * u * u * u / 3.0 + u * u * u * u * u / 5.0);
            break;
    }
    return f < 0.0 ? 0.0 : (f > 1.0 ? 1.0 : f);
}

std::span<const double> Kernel::breakpoints() const {
    if (id == KernelId::triangular) return kTriangularPieces;
    return kSinglePiece;
}

Kernel epanechnikov_kernel() { return {KernelId::epanechnikov, 1.0, 2}; }
Kernel triangular_kernel() { return {KernelId::triangular, 1.0, 1}; }
Kernel biweight_kernel() { return {KernelId::biweight, 1.0, 4}; }

Kernel kernel_from_name(std::string_view name) {
    if (name == "epanechnikov") return epanechnikov_kernel();
    if (name == "triangular") return triangular_kernel();
    if (name == "biweight") return biweight_kernel();
    throw ValidationError("unknown kernel '" + std::string(name) +
                          "'; expected epanechnikov, triangular or biweight");
}

std::string kernel_name(const Kernel& kernel) {
    switch (kernel.id) {
        case KernelId::epanechnikov: return "epanechnikov";
        case KernelId::triangular: return "triangular";
        case KernelId::biweight: return "biweight";
    }
    return "?";
}

double boundary_norm(const Kernel& kernel, double t, double h, double horizon) {
    if (!(h > 0.0)) throw InvalidBandwidthError("bandwidth must be positive");
    return kernel.cdf(t / h) - kernel.cdf((t - horizon) / h);
}

}  // namespace trendband
