#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace pk {

using Complex = std::complex<double>;
using Index = std::ptrdiff_t;

/// Raised for any violated precondition on user-supplied data (bad grid,
/// inadmissible exponents, wrong rank, ...). The CLI maps it to exit code 2.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Periodic space-time lattice covering (-T/2, T/2) x (-L/2, L/2)^d.
///
/// Samples are stored row-major with time outermost, then x_1 ... x_d
/// (x_d fastest). Time index n sits at t = -T/2 + n dt, so the first nt/2
/// indices are the negative-time half used by causal extension.
struct GridSpec {
    int d = 3;
    int nx = 16;
    int nt = 16;
    double L = 1.0;
    double T = 1.0;

    double dx() const { return L / nx; }
    double dt() const { return T / nt; }
    /// Homogeneous dimension of the parabolic metric.
    int Q() const { return d + 2; }

    Index spatial_points() const;
    Index points() const { return spatial_points() * nt; }
    double cell_volume() const;

    double time_at(Index n) const { return -0.5 * T + static_cast<double>(n) * dt(); }
    double coord_at(Index j) const { return -0.5 * L + static_cast<double>(j) * dx(); }
    /// Index of t = 0 (equivalently of x_i = 0 on a spatial axis).
    Index time_origin() const { return nt / 2; }
    Index space_origin() const { return nx / 2; }

    /// Lattice dimensions in storage order: {nt, nx, ..., nx}.
    std::vector<int> dims() const;
    std::vector<int> spatial_dims() const;

    /// Same domain, every resolution multiplied by `factor`.
    GridSpec refined(int factor = 2) const;

    bool operator==(const GridSpec&) const = default;
};

/// Validating constructor; throws ValidationError ("resolution", "extent").
GridSpec build_grid(int d, int nx, int nt, double L, double T);

/// Throws if `grid` breaks any GridSpec invariant.
void validate(const GridSpec& grid);

/// Signed integer frequency of FFT index m on an axis of n points.
/// Index n/2 maps to -n/2.
inline int signed_frequency(Index m, int n) { return m < n / 2 ? static_cast<int>(m) : static_cast<int>(m) - n; }

/// Minimal-image lattice offset in [-n/2, n/2).
inline Index wrap_offset(Index m, int n)
{
    Index r = ((m % n) + n) % n;
    return r < n / 2 ? r : r - n;
}

inline Index wrap_index(Index m, int n) { return ((m % n) + n) % n; }

/// Decomposes a spatial flat index into per-axis indices (x_1 first).
void unflatten_spatial(Index s, const GridSpec& grid, std::vector<Index>& out);
Index flatten_spatial(const std::vector<Index>& idx, const GridSpec& grid);

std::string describe(const GridSpec& grid);

}  // namespace pk
