#include "parakrylov/grid.hpp"

#include <cmath>
#include <sstream>

namespace pk {

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

Index GridSpec::spatial_points() const
{
    Index n = 1;
    for (int a = 0; a < d; ++a) n *= nx;
    return n;
}

double GridSpec::cell_volume() const { return std::pow(dx(), d) * dt(); }

std::vector<int> GridSpec::dims() const
{
    std::vector<int> out(static_cast<std::size_t>(d) + 1, nx);
    out[0] = nt;
    return out;
}

std::vector<int> GridSpec::spatial_dims() const { return std::vector<int>(static_cast<std::size_t>(d), nx); }

GridSpec GridSpec::refined(int factor) const
{
    GridSpec g = *this;
    g.nx *= factor;
    g.nt *= factor;
    return g;
}

void validate(const GridSpec& grid)
{
    if (grid.d < 1) throw ValidationError("grid: spatial dimension must be >= 1");
    if (!is_power_of_two(grid.nx) || grid.nx < 8)
        throw ValidationError("grid: resolution Nx=" + std::to_string(grid.nx) + " must be a power of two >= 8");
    if (!is_power_of_two(grid.nt) || grid.nt < 8)
        throw ValidationError("grid: resolution Nt=" + std::to_string(grid.nt) + " must be a power of two >= 8");
    if (!(grid.L > 0.0) || !(grid.T > 0.0) || !std::isfinite(grid.L) || !std::isfinite(grid.T))
        throw ValidationError("grid: extent L and T must be positive");
}

GridSpec build_grid(int d, int nx, int nt, double L, double T)
{
    GridSpec g{d, nx, nt, L, T};
    validate(g);
    return g;
}

void unflatten_spatial(Index s, const GridSpec& grid, std::vector<Index>& out)
{
    out.resize(static_cast<std::size_t>(grid.d));
    for (int a = grid.d - 1; a >= 0; --a) {
        out[static_cast<std::size_t>(a)] = s % grid.nx;
        s /= grid.nx;
    }
}

Index flatten_spatial(const std::vector<Index>& idx, const GridSpec& grid)
{
    Index s = 0;
    for (int a = 0; a < grid.d; ++a) s = s * grid.nx + wrap_index(idx[static_cast<std::size_t>(a)], grid.nx);
    return s;
}

std::string describe(const GridSpec& grid)
{
    std::ostringstream os;
    os << "d=" << grid.d << " Nx=" << grid.nx << " Nt=" << grid.nt << " L=" << grid.L << " T=" << grid.T;
    return os.str();
}

}  // namespace pk
