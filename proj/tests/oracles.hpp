#pragma once

// Independent reference computations shared by the unit and acceptance tests.
// Nothing here calls the library's transform or norm code.

#include <cmath>
#include <numbers>
#include <vector>

#include "parakrylov/field.hpp"

namespace oracle {

using pk::Complex;
using pk::Index;

/// Direct O(N^2) DFT coefficient fhat(omega, k) with the dx^d dt weight.
template <class Scalar>
Complex direct_coefficient(const pk::BasicField<Scalar>& f, int omega, const std::vector<int>& k, int c = 0)
{
    const pk::GridSpec& g = f.grid();
    const double two_pi = 2.0 * std::numbers::pi;
    std::vector<Index> idx;
    Complex sum = 0.0;
    for (Index n = 0; n < g.nt; ++n)
        for (Index s = 0; s < g.spatial_points(); ++s) {
            pk::unflatten_spatial(s, g, idx);
            double phase = static_cast<double>(omega * n) / g.nt;
            for (int a = 0; a < g.d; ++a) phase += static_cast<double>(k[static_cast<std::size_t>(a)] * idx[static_cast<std::size_t>(a)]) / g.nx;
            sum += Complex(f.at(n, s, c)) * std::polar(1.0, -two_pi * phase);
        }
    return sum * g.cell_volume();
}

/// Golden-section maximization of a unimodal function on [a, b].
template <class Fn>
double golden_max(Fn&& fn, double a, double b, int iterations = 200)
{
    const double r = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - r * (b - a);
    double d = a + r * (b - a);
    for (int i = 0; i < iterations; ++i) {
        if (fn(c) > fn(d))
            b = d;
        else
            a = c;
        c = b - r * (b - a);
        d = a + r * (b - a);
    }
    return fn(0.5 * (a + b));
}

/// Least-squares slope of log y against log x.
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log(x[i]);
        const double ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace oracle
