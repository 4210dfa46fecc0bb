#include "parakrylov/potential.hpp"

#include <cmath>

#include "lattice_ops.hpp"

namespace pk {

void validate(const AnisotropyVector& a, const GridSpec& g)
{
    if (static_cast<int>(a.a.size()) != g.d + 1) throw ValidationError("anisotropy: need one exponent per lattice axis");
    for (double v : a.a)
        if (!(v >= 1.0)) throw ValidationError("anisotropy: exponents must be >= 1");
}

template <class Scalar>
Field parabolic_maximal(const BasicField<Scalar>& f, const SupSamplingPlan& plan)
{
    const GridSpec& g = f.grid();
    validate(plan, g);
    const auto dims = g.dims();
    const Eigen::VectorXcd data = detail::Convolver::spectrum(dims, magnitude(f));
    Eigen::ArrayXd best = Eigen::ArrayXd::Zero(g.points());
    for (double rho : plan.radii) {
        const Eigen::ArrayXd kernel = detail::parabolic_ball_kernel(g, rho);
        const double count = kernel.sum();
        if (count == 0.0) continue;
        const detail::Convolver conv(dims, kernel);
        best = best.max((conv.apply_spectrum(data) / count).max(0.0));
    }
    return Field(g, Rank::scalar, best.matrix(), f.support());
}

template <class Scalar>
Field parabolic_maximal(const BasicField<Scalar>& f)
{
    return parabolic_maximal(f, SupSamplingPlan::dyadic(f.grid()));
}

template <class Scalar>
Field anisotropic_maximal(const BasicField<Scalar>& f, const AnisotropyVector& a, const std::vector<double>& radii)
{
    const GridSpec& g = f.grid();
    validate(a, g);
    const auto dims = g.dims();
    const Eigen::ArrayXd mag = magnitude(f);
    Eigen::ArrayXd best = Eigen::ArrayXd::Zero(g.points());
    for (double r : radii) {
        if (!(r > 0.0)) throw ValidationError("anisotropic_maximal: radii must be positive");
        Eigen::ArrayXd acc = mag;
        double count = 1.0;
        for (int axis = 0; axis <= g.d; ++axis) {
            const double h = axis == 0 ? g.dt() : g.dx();
            const auto w = detail::axis_window(dims[static_cast<std::size_t>(axis)], h, std::pow(r, a.a[static_cast<std::size_t>(axis)]));
            acc = detail::axis_window_sum(acc, dims, axis, w);
            count *= w.full ? dims[static_cast<std::size_t>(axis)] : 2 * w.half + 1;
        }
        best = best.max(acc / count);
    }
    return Field(g, Rank::scalar, best.matrix(), f.support());
}

template <class Scalar>
Field cubic_maximal(const BasicField<Scalar>& f, const std::vector<double>& radii)
{
    const GridSpec& g = f.grid();
    const auto dims = g.dims();
    const Eigen::VectorXcd data = detail::Convolver::spectrum(dims, magnitude(f));
    Eigen::ArrayXd best = Eigen::ArrayXd::Zero(g.points());
    const Index ns = g.spatial_points();
    std::vector<Index> idx;
    for (double r : radii) {
        if (!(r > 0.0)) throw ValidationError("cubic_maximal: radii must be positive");
        Eigen::ArrayXd kernel = Eigen::ArrayXd::Zero(g.points());
        for (Index n = 0; n < g.nt; ++n) {
            // Same full-period rule as the window sums: a box wider than the
            // period covers each index once.
            const auto wt = detail::axis_window(g.nt, g.dt(), r);
            const Index mt = wrap_offset(n, g.nt);
            if (!wt.full && std::abs(mt) > wt.half) continue;
            const auto wx = detail::axis_window(g.nx, g.dx(), r);
            for (Index s = 0; s < ns; ++s) {
                unflatten_spatial(s, g, idx);
                bool inside = true;
                for (Index v : idx) inside = inside && (wx.full || std::abs(wrap_offset(v, g.nx)) <= wx.half);
                if (inside) kernel[n * ns + s] = 1.0;
            }
        }
        const double count = kernel.sum();
        const detail::Convolver conv(dims, kernel);
        best = best.max((conv.apply_spectrum(data) / count).max(0.0));
    }
    return Field(g, Rank::scalar, best.matrix(), f.support());
}

double riesz_kernel(const GridSpec& g, double alpha, Index m, const std::vector<Index>& j)
{
    double sq = 0.0;
    for (Index v : j) {
        const auto o = static_cast<double>(wrap_offset(v, g.nx));
        sq += o * o;
    }
    const double rho = std::sqrt(std::abs(static_cast<double>(wrap_offset(m, g.nt))) * g.dt()) + std::sqrt(sq) * g.dx();
    if (rho == 0.0) return riesz_self_cell(g, alpha);
    return std::pow(rho, -(g.Q() - alpha));
}

double riesz_self_cell(const GridSpec& g, double alpha)
{
    const int sub = 4;
    const int axes = g.d + 1;
    Index total = 1;
    for (int a = 0; a < axes; ++a) total *= sub;
    double sum = 0.0;
    for (Index i = 0; i < total; ++i) {
        Index r = i;
        const double t = ((static_cast<double>(r % sub) + 0.5) / sub - 0.5) * g.dt();
        r /= sub;
        double sq = 0.0;
        for (int a = 0; a < g.d; ++a) {
            const double x = ((static_cast<double>(r % sub) + 0.5) / sub - 0.5) * g.dx();
            r /= sub;
            sq += x * x;
        }
        sum += std::pow(std::sqrt(std::abs(t)) + std::sqrt(sq), -(g.Q() - alpha));
    }
    return sum / static_cast<double>(total);
}

Field riesz_potential(const Field& f, double alpha)
{
    const GridSpec& g = f.grid();
    if (!(alpha > 0.0) || !(alpha < g.Q())) throw ValidationError("riesz_potential: alpha must lie in (0, Q)");
    const Index ns = g.spatial_points();
    Eigen::ArrayXd kernel(g.points());
    std::vector<Index> idx;
    for (Index n = 0; n < g.nt; ++n)
        for (Index s = 0; s < ns; ++s) {
            unflatten_spatial(s, g, idx);
            kernel[n * ns + s] = riesz_kernel(g, alpha, n, idx);
        }
    const detail::Convolver conv(g.dims(), kernel * g.cell_volume());
    Field out(g, f.rank(), f.support());
    for (int c = 0; c < f.components(); ++c) {
        const Eigen::ArrayXd col = f.samples().col(c).array();
        out.mutable_samples().col(c) = conv.apply(col).matrix();
    }
    return out;
}

#define PK_POTENTIAL_INSTANTIATE(S)                                                                  \
    template Field parabolic_maximal(const BasicField<S>&, const SupSamplingPlan&);                  \
    template Field parabolic_maximal(const BasicField<S>&);                                          \
    template Field anisotropic_maximal(const BasicField<S>&, const AnisotropyVector&, const std::vector<double>&); \
    template Field cubic_maximal(const BasicField<S>&, const std::vector<double>&);

PK_POTENTIAL_INSTANTIATE(double)
PK_POTENTIAL_INSTANTIATE(Complex)

#undef PK_POTENTIAL_INSTANTIATE

}  // namespace pk
