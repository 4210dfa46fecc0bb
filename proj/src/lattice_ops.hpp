#pragma once

// Lattice stencils, periodic convolutions and window sums shared by the norm
// and potential modules.

#include <vector>

#include "parakrylov/normbank.hpp"

namespace pk::detail {

/// Offsets m with |m| dt < rho^2. `full` when the window covers the period.
struct TimeWindow {
    Index half = 0;
    bool full = false;
};
TimeWindow time_window(const GridSpec& g, double rho);

/// Largest m >= 0 with m h < width (strict), capped so that a full period is
/// flagged instead of counting indices twice.
TimeWindow axis_window(int n, double h, double width);

/// Spatial offsets (minimal image, per axis) inside the ball |j| dx < rho.
std::vector<std::vector<Index>> spatial_ball_offsets(const GridSpec& g, double rho);

/// Indicator kernels indexed by wrapped offset.
Eigen::ArrayXd spatial_ball_kernel(const GridSpec& g, double rho);
Eigen::ArrayXd parabolic_ball_kernel(const GridSpec& g, double rho);

/// Periodic convolution with a fixed real kernel on a lattice of shape dims.
class Convolver {
public:
    Convolver(std::vector<int> dims, const Eigen::ArrayXd& kernel);
    /// Convolves every contiguous block of size prod(dims) in `in`.
    Eigen::ArrayXd apply(const Eigen::ArrayXd& in) const;
    /// Same, for a single block whose r2c spectrum is already known.
    Eigen::ArrayXd apply_spectrum(const Eigen::VectorXcd& in_hat) const;
    /// r2c spectrum of one block, for reuse across kernels.
    static Eigen::VectorXcd spectrum(const std::vector<int>& dims, const Eigen::ArrayXd& in);

private:
    std::vector<int> dims_;
    Index size_ = 0;
    Eigen::VectorXcd kernel_hat_;
};

/// Cyclic window sum along one axis of a row-major array of shape dims.
Eigen::ArrayXd axis_window_sum(const Eigen::ArrayXd& in, const std::vector<int>& dims, int axis, const TimeWindow& w);

/// Flat indices of the plan centres.
std::vector<Index> plan_centers(const GridSpec& g, const SupSamplingPlan& plan);

/// Decomposes a flat lattice index into (n, spatial indices).
CylinderSpec centre_of(const GridSpec& g, Index flat, double radius, CylinderKind kind);

template <class Scalar>
Eigen::ArrayXd pointwise_magnitude(const BasicField<Scalar>& f)
{
    return magnitude(f);
}

}  // namespace pk::detail
