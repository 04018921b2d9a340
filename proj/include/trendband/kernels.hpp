#ifndef TRENDBAND_KERNELS_HPP
#define TRENDBAND_KERNELS_HPP

#include <span>
#include <string>
#include <string_view>

namespace trendband {

enum class KernelId { epanechnikov, triangular, biweight };

/// Symmetric, compactly supported, Lipschitz probability density on [-1, 1].
/// All shipped kernels are piecewise polynomial with closed-form CDFs, which
/// makes the convolution in the trend estimator exactly integrable.
struct Kernel {
    KernelId id = KernelId::epanechnikov;
    double support_radius = 1.0;
    int poly_degree = 2;  // max polynomial degree of K on its support

    /// K(u); zero outside [-1, 1].
    double value(double u) const;

    /// F(u) = integral of K over [-1, u], clamped to [0, 1].
    double cdf(double u) const;

    /// Abscissae where the polynomial form of K changes, including +-1.
    std::span<const double> breakpoints() const;
};

Kernel epanechnikov_kernel();
Kernel triangular_kernel();
Kernel biweight_kernel();

Kernel kernel_from_name(std::string_view name);
std::string kernel_name(const Kernel& kernel);

/// Mass of the scaled kernel K_h(t - .) over [0, T]: F(t/h) - F((t-T)/h).
/// Equals 1 whenever the support [t-h, t+h] lies inside [0, T].
double boundary_norm(const Kernel& kernel, double t, double h, double horizon);

}  // namespace trendband

#endif
