#pragma once

#include <vector>

#include "parakrylov/normbank.hpp"

namespace pk {

/// Per-axis exponents a_i >= 1 over the lattice axes (t, x_1, ..., x_d).
struct AnisotropyVector {
    std::vector<double> a;
};

void validate(const AnisotropyVector& a, const GridSpec& grid);

/// Pointwise max over the plan radii of averages of |f| over parabolic balls
/// (periodic distance). Averages divide by the ball's lattice point count.
template <class Scalar>
Field parabolic_maximal(const BasicField<Scalar>& f, const SupSamplingPlan& plan);
template <class Scalar>
Field parabolic_maximal(const BasicField<Scalar>& f);

/// Averages over boxes with half-widths r^{a_i} (physical units per axis),
/// evaluated by separable direct window sums.
template <class Scalar>
Field anisotropic_maximal(const BasicField<Scalar>& f, const AnisotropyVector& a, const std::vector<double>& radii);

/// Cube maximal function (half-width r on every axis) through an FFT box
/// convolution; an independent path for the a = (1, ..., 1) case.
template <class Scalar>
Field cubic_maximal(const BasicField<Scalar>& f, const std::vector<double>& radii);

/// rho^{-(Q - alpha)} for the lattice offset (m, j), minimal image.
double riesz_kernel(const GridSpec& grid, double alpha, Index m, const std::vector<Index>& j);
/// Average of the kernel over the origin cell from a 4^{d+1} midpoint subsample.
double riesz_self_cell(const GridSpec& grid, double alpha);

/// I_alpha f = sum over the lattice of K(offset) f dmu, every component.
Field riesz_potential(const Field& f, double alpha);

}  // namespace pk
