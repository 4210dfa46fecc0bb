#include "lattice_ops.hpp"

#include <cmath>

#include "fft.hpp"

namespace pk::detail {

TimeWindow axis_window(int n, double h, double width)
{
    TimeWindow w;
    if (!(width > 0.0)) return w;
    Index m = static_cast<Index>(std::ceil(width / h)) - 1;
    while (static_cast<double>(m + 1) * h < width) ++m;
    while (m > 0 && static_cast<double>(m) * h >= width) --m;
    if (2 * m + 1 >= n) {
        w.half = n / 2;
        w.full = true;
    } else {
        w.half = m;
    }
    return w;
}

TimeWindow time_window(const GridSpec& g, double rho) { return axis_window(g.nt, g.dt(), rho * rho); }

std::vector<std::vector<Index>> spatial_ball_offsets(const GridSpec& g, double rho)
{
    std::vector<std::vector<Index>> out;
    const Index ns = g.spatial_points();
    std::vector<Index> idx;
    for (Index s = 0; s < ns; ++s) {
        unflatten_spatial(s, g, idx);
        double sq = 0.0;
        for (auto& v : idx) {
            v = wrap_offset(v, g.nx);
            sq += static_cast<double>(v * v);
        }
        if (std::sqrt(sq) * g.dx() < rho) out.push_back(idx);
    }
    return out;
}

Eigen::ArrayXd spatial_ball_kernel(const GridSpec& g, double rho)
{
    const Index ns = g.spatial_points();
    Eigen::ArrayXd k = Eigen::ArrayXd::Zero(ns);
    std::vector<Index> idx;
    for (Index s = 0; s < ns; ++s) {
        unflatten_spatial(s, g, idx);
        double sq = 0.0;
        for (Index v : idx) {
            const auto o = static_cast<double>(wrap_offset(v, g.nx));
            sq += o * o;
        }
        if (std::sqrt(sq) * g.dx() < rho) k[s] = 1.0;
    }
    return k;
}

Eigen::ArrayXd parabolic_ball_kernel(const GridSpec& g, double rho)
{
    const Index ns = g.spatial_points();
    const Eigen::ArrayXd radial = [&] {
        Eigen::ArrayXd r(ns);
        std::vector<Index> idx;
        for (Index s = 0; s < ns; ++s) {
            unflatten_spatial(s, g, idx);
            double sq = 0.0;
            for (Index v : idx) {
                const auto o = static_cast<double>(wrap_offset(v, g.nx));
                sq += o * o;
            }
            r[s] = std::sqrt(sq) * g.dx();
        }
        return r;
    }();
    Eigen::ArrayXd k = Eigen::ArrayXd::Zero(g.points());
    for (Index n = 0; n < g.nt; ++n) {
        const double ts = std::sqrt(std::abs(static_cast<double>(wrap_offset(n, g.nt))) * g.dt());
        if (ts >= rho) continue;
        for (Index s = 0; s < ns; ++s)
            if (ts + radial[s] < rho) k[n * ns + s] = 1.0;
    }
    return k;
}

Convolver::Convolver(std::vector<int> dims, const Eigen::ArrayXd& kernel) : dims_(std::move(dims))
{
    size_ = 1;
    for (int v : dims_) size_ *= v;
    kernel_hat_.resize(fft::half_size(dims_));
    Eigen::ArrayXd copy = kernel;
    fft::r2c(dims_, copy.data(), kernel_hat_.data());
    kernel_hat_ /= static_cast<double>(size_);
}

Eigen::ArrayXd Convolver::apply(const Eigen::ArrayXd& in) const
{
    Eigen::ArrayXd out(in.size());
    Eigen::VectorXcd buf(kernel_hat_.size());
    const Index blocks = in.size() / size_;
    for (Index b = 0; b < blocks; ++b) {
        fft::r2c(dims_, in.data() + b * size_, buf.data());
        buf.array() *= kernel_hat_.array();
        fft::c2r(dims_, buf.data(), out.data() + b * size_);
    }
    return out;
}

Eigen::VectorXcd Convolver::spectrum(const std::vector<int>& dims, const Eigen::ArrayXd& in)
{
    Eigen::VectorXcd out(fft::half_size(dims));
    fft::r2c(dims, in.data(), out.data());
    return out;
}

Eigen::ArrayXd Convolver::apply_spectrum(const Eigen::VectorXcd& in_hat) const
{
    Eigen::VectorXcd buf = (in_hat.array() * kernel_hat_.array()).matrix();
    Eigen::ArrayXd out(size_);
    fft::c2r(dims_, buf.data(), out.data());
    return out;
}

Eigen::ArrayXd axis_window_sum(const Eigen::ArrayXd& in, const std::vector<int>& dims, int axis, const TimeWindow& w)
{
    const int n = dims[static_cast<std::size_t>(axis)];
    Index inner = 1;
    for (std::size_t a = static_cast<std::size_t>(axis) + 1; a < dims.size(); ++a) inner *= dims[a];
    const Index outer = in.size() / (inner * n);
    Eigen::ArrayXd out(in.size());
    std::vector<double> line(static_cast<std::size_t>(n));
    std::vector<double> prefix(static_cast<std::size_t>(3 * n) + 1);
    for (Index o = 0; o < outer; ++o)
        for (Index i = 0; i < inner; ++i) {
            const Index base = o * n * inner + i;
            double total = 0.0;
            for (int m = 0; m < n; ++m) {
                line[static_cast<std::size_t>(m)] = in[base + m * inner];
                total += line[static_cast<std::size_t>(m)];
            }
            if (w.full) {
                for (int m = 0; m < n; ++m) out[base + m * inner] = total;
                continue;
            }
            // Direct window sums: windows are short next to the axis length and
            // this keeps every sum free of prefix cancellation.
            for (int m = 0; m < n; ++m) {
                double acc = 0.0;
                for (Index k = -w.half; k <= w.half; ++k) acc += line[static_cast<std::size_t>(wrap_index(m + k, n))];
                out[base + m * inner] = acc;
            }
        }
    return out;
}

std::vector<Index> plan_centers(const GridSpec& g, const SupSamplingPlan& plan)
{
    std::vector<Index> out;
    const Index ns = g.spatial_points();
    std::vector<Index> idx;
    std::vector<Index> spatial;
    for (Index s = 0; s < ns; ++s) {
        unflatten_spatial(s, g, idx);
        bool ok = true;
        for (Index v : idx) ok = ok && (v - g.space_origin()) % plan.stride == 0;
        if (ok) spatial.push_back(s);
    }
    for (Index n = 0; n < g.nt; ++n) {
        if ((n - g.time_origin()) % plan.time_stride != 0) continue;
        for (Index s : spatial) out.push_back(n * ns + s);
    }
    return out;
}

CylinderSpec centre_of(const GridSpec& g, Index flat, double radius, CylinderKind kind)
{
    CylinderSpec c;
    const Index ns = g.spatial_points();
    c.n = flat / ns;
    unflatten_spatial(flat % ns, g, c.x);
    c.radius = radius;
    c.kind = kind;
    return c;
}

}  // namespace pk::detail
