#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "parakrylov/field.hpp"

namespace pk {

struct ZeroPreset {};

struct ConstantPreset {
    Complex a{1.0, 0.0};
};

/// e^{i(tau t + xi . x)} with tau = 2 pi omega / T, xi = 2 pi k / L. Complex
/// fields only.
struct ModePreset {
    int omega = 0;
    std::vector<int> k;
    Complex amplitude{1.0, 0.0};
};

/// amplitude * exp(-sum_a ((z_a - c_a) / w_a)^2 / 2) over (t, x_1..x_d), with
/// minimal-image differences.
struct GaussianPreset {
    std::vector<double> center;
    std::vector<double> widths;
    double amplitude = 1.0;
};

/// Indicator of the parabolic ball sqrt|t - t0| + |x - x0| < r.
struct ParabolicIndicatorPreset {
    std::vector<double> center;
    double r = 0.25;
    double amplitude = 1.0;
};

/// Random trigonometric polynomial with |omega|, |k_a| <= max_mode, zero mode
/// excluded, normal coefficients scaled so the RMS is `amplitude`. Real
/// fields get Hermitian-symmetric spectra.
struct RandomBandlimitedPreset {
    std::uint64_t seed = 0;
    int max_mode = 4;
    double amplitude = 1.0;
};

using Preset = std::variant<ZeroPreset, ConstantPreset, ModePreset, GaussianPreset, ParabolicIndicatorPreset,
                            RandomBandlimitedPreset>;

/// Samples `preset` on `grid`. Every component of a vector or tensor field
/// receives the same deterministic profile, except random_bandlimited where
/// component c draws from the stream (seed, c).
template <class Scalar>
BasicField<Scalar> sample_preset(const Preset& preset, const GridSpec& grid, Rank rank = Rank::scalar);

/// Lebesgue measure of the unit parabolic ball in R x R^d.
double parabolic_unit_ball_measure(int d);

/// Minimal-image distances on the periodic lattice.
double periodic_gap(double a, double b, double period);

}  // namespace pk
