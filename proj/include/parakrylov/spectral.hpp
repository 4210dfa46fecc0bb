#pragma once

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "parakrylov/field.hpp"

namespace pk {

/// Angular and integer frequencies of the lattice, tabulated once per grid.
/// Index m on an axis of n points carries the integer frequency
/// signed_frequency(m, n) and the angular frequency 2 pi k / L (2 pi w / T in
/// time).
struct FrequencyTable {
    GridSpec grid;
    std::vector<double> tau;      // [nt]
    std::vector<int> omega;       // [nt]
    std::vector<double> xi;       // [Ns * d], axis fastest
    std::vector<int> k;           // [Ns * d]
    std::vector<double> xi_norm;  // [Ns]

    explicit FrequencyTable(const GridSpec& g);

    std::span<const double> xi_at(Index s) const { return {xi.data() + s * grid.d, static_cast<std::size_t>(grid.d)}; }
    std::span<const int> k_at(Index s) const { return {k.data() + s * grid.d, static_cast<std::size_t>(grid.d)}; }
};

/// Coefficients of a field on the full (omega, k) lattice.
///
/// Normalization: the forward transform carries the cell weight dx^d dt,
///   fhat(w, k) = dx^d dt sum_{n, j} f(t_n, x_j) e^{-2 pi i (w n / Nt + k.j / Nx)},
/// referenced to the lattice origin index. The inverse carries 1 / (T L^d),
/// so sum |f|^2 dx^d dt = (1 / (T L^d)) sum |fhat|^2.
struct SpectralField {
    GridSpec grid;
    Rank rank = Rank::scalar;
    Eigen::MatrixXcd coefficients;  // (points x components), same ordering as the field

    /// Coefficient at integer frequencies (omega, k_1..k_d), component c.
    Complex coefficient(int omega, std::span<const int> k, int c = 0) const;
};

template <class Scalar>
SpectralField forward_transform(const BasicField<Scalar>& f);

/// Inverse transform. For real output the imaginary part is discarded.
template <class Scalar>
BasicField<Scalar> inverse_transform(const SpectralField& fh);

/// sum |f|^2 dx^d dt, ascending index order.
template <class Scalar>
double physical_energy(const BasicField<Scalar>& f);
/// (1 / (T L^d)) sum |fhat|^2.
double spectral_energy(const SpectralField& fh);

/// A Fourier multiplier. `spacetime` symbols depend on (tau, xi); `spatial`
/// symbols on xi only (applied slice-wise); `homogeneous0` symbols are
/// sigma_0(xi / |xi|) for a function sigma_0 on the unit sphere. The zero
/// frequency always receives `zero_mode_value` (for spatial and homogeneous
/// symbols: every xi = 0 mode, whatever tau).
struct MultiplierSymbol {
    enum class Kind { spacetime, spatial, homogeneous0 };

    Kind kind = Kind::spatial;
    std::function<Complex(double tau, std::span<const double> xi)> spacetime_fn;
    std::function<Complex(std::span<const double> xi)> spatial_fn;
    std::function<Complex(std::span<const double> unit)> sphere_fn;
    Complex zero_mode_value{0.0, 0.0};
    std::string name;

    Complex operator()(double tau, std::span<const double> xi, double xi_norm) const;
    Complex operator()(double tau, std::span<const double> xi) const;
};

using SphereFunction = std::function<Complex(std::span<const double> unit)>;

MultiplierSymbol spacetime_symbol(std::function<Complex(double, std::span<const double>)> fn, Complex zero_mode,
                                  std::string name = "spacetime");
MultiplierSymbol spatial_symbol(std::function<Complex(std::span<const double>)> fn, Complex zero_mode,
                                std::string name = "spatial");
MultiplierSymbol homogeneous_symbol(SphereFunction sigma0, Complex zero_mode = 0.0, std::string name = "sigma0");

struct SymbolParams {
    double t = 0.0;      // heat time
    double theta = 0.0;  // Gauss-flow scale
    int i = 0;           // component indices (0-based)
    int j = 0;
    Complex c{1.0, 0.0};  // sigma0_const value
};

/// Registry: "heat" (t), "gauss" (theta), "leray" (i, j entry of the
/// projector), "riesz_j" (j: i xi_j / |xi|), "sigma0_const" (c).
MultiplierSymbol named_symbol(std::string_view name, const SymbolParams& params = {});

template <class Scalar>
BasicField<Scalar> apply_multiplier(const BasicField<Scalar>& f, const MultiplierSymbol& symbol);

/// e^{t Delta} on one slice. Throws for t < 0.
template <class Scalar>
SpaceSlice<Scalar> heat_propagate(const SpaceSlice<Scalar>& slice, double t);
/// e^{t Delta} applied to every time slice.
template <class Scalar>
BasicField<Scalar> heat_propagate(const BasicField<Scalar>& f, double t);

/// e^{theta^2 (d_t^2 - Delta^2)}: multiplier exp(-theta^2 tau^2 - theta^2 |xi|^4).
template <class Scalar>
BasicField<Scalar> gauss_flow(const BasicField<Scalar>& f, double theta);

/// Leray projector Id - xi xi^T / |xi|^2 on a vector field; the xi = 0 mode is
/// left unchanged.
template <class Scalar>
BasicField<Scalar> leray_project(const BasicField<Scalar>& v);

/// sigma(D) for a degree-0 homogeneous symbol, applied to every component.
template <class Scalar>
BasicField<Scalar> apply_sigma(const BasicField<Scalar>& f, const MultiplierSymbol& sigma);
template <class Scalar>
BasicField<Scalar> apply_sigma(const BasicField<Scalar>& f, const SphereFunction& sigma0, Complex zero_mode = 0.0);

// Spectral derivatives with the exact torus symbols i xi_a and i tau.
template <class Scalar>
BasicField<Scalar> partial_space(const BasicField<Scalar>& f, int axis);
template <class Scalar>
BasicField<Scalar> partial_time(const BasicField<Scalar>& f);
template <class Scalar>
BasicField<Scalar> laplacian(const BasicField<Scalar>& f);
/// Raises rank: scalar -> vector (grad), vector -> tensor (entry (i, j) = d_j u_i).
template <class Scalar>
BasicField<Scalar> gradient(const BasicField<Scalar>& f);
/// Lowers rank: vector -> scalar, tensor -> vector with (Div F)_i = sum_j d_j F_ij.
template <class Scalar>
BasicField<Scalar> divergence(const BasicField<Scalar>& f);

/// Physical-space kernel of a spatial multiplier, centred on the lattice
/// origin: K(x_j) = L^{-d} sum_k symbol(xi_k) e^{i xi_k . (x_j - x_origin)}.
SpaceSlice<double> multiplier_kernel(const GridSpec& grid, const MultiplierSymbol& symbol);

/// Zeroes every spatial mode with |k_a| > Nx / 3 on some axis (2/3 rule).
template <class Scalar>
BasicField<Scalar> dealias(const BasicField<Scalar>& f);

}  // namespace pk
