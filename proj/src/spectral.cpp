#include "parakrylov/spectral.hpp"

#include <cmath>
#include <numbers>

#include "fft.hpp"
#include "spectral_detail.hpp"

namespace pk {

FrequencyTable::FrequencyTable(const GridSpec& g) : grid(g)
{
    const double two_pi = 2.0 * std::numbers::pi;
    tau.resize(static_cast<std::size_t>(g.nt));
    omega.resize(static_cast<std::size_t>(g.nt));
    for (Index n = 0; n < g.nt; ++n) {
        omega[static_cast<std::size_t>(n)] = signed_frequency(n, g.nt);
        tau[static_cast<std::size_t>(n)] = two_pi * omega[static_cast<std::size_t>(n)] / g.T;
    }
    const Index ns = g.spatial_points();
    xi.resize(static_cast<std::size_t>(ns * g.d));
    k.resize(static_cast<std::size_t>(ns * g.d));
    xi_norm.resize(static_cast<std::size_t>(ns));
    std::vector<Index> idx;
    for (Index s = 0; s < ns; ++s) {
        unflatten_spatial(s, g, idx);
        double sq = 0.0;
        for (int a = 0; a < g.d; ++a) {
            const auto pos = static_cast<std::size_t>(s * g.d + a);
            k[pos] = signed_frequency(idx[static_cast<std::size_t>(a)], g.nx);
            xi[pos] = two_pi * k[pos] / g.L;
            sq += xi[pos] * xi[pos];
        }
        xi_norm[static_cast<std::size_t>(s)] = std::sqrt(sq);
    }
}

Complex SpectralField::coefficient(int omega_, std::span<const int> kk, int c) const
{
    const Index n = wrap_index(omega_, grid.nt);
    std::vector<Index> idx(kk.begin(), kk.end());
    return coefficients(n * grid.spatial_points() + flatten_spatial(idx, grid), c);
}

namespace detail {

Eigen::VectorXcd spectrum_of(const GridSpec& g, const Eigen::Ref<const Eigen::VectorXcd>& samples)
{
    Eigen::VectorXcd buf = samples;
    const auto dims = g.dims();
    fft::c2c(dims, 1, buf.data(), buf.data(), fft::Direction::forward);
    return buf;
}

void invert_in_place(const GridSpec& g, Eigen::VectorXcd& buf)
{
    const auto dims = g.dims();
    fft::c2c(dims, 1, buf.data(), buf.data(), fft::Direction::backward);
    buf /= static_cast<double>(g.points());
}

void spatial_forward(const GridSpec& g, Eigen::VectorXcd& buf)
{
    const auto dims = g.spatial_dims();
    fft::c2c(dims, g.nt, buf.data(), buf.data(), fft::Direction::forward);
}

void spatial_backward(const GridSpec& g, Eigen::VectorXcd& buf)
{
    const auto dims = g.spatial_dims();
    fft::c2c(dims, g.nt, buf.data(), buf.data(), fft::Direction::backward);
    buf /= static_cast<double>(g.spatial_points());
}

std::vector<Complex> tabulate(const FrequencyTable& table, const MultiplierSymbol& symbol)
{
    const GridSpec& g = table.grid;
    const Index ns = g.spatial_points();
    if (symbol.kind != MultiplierSymbol::Kind::spacetime) {
        std::vector<Complex> out(static_cast<std::size_t>(ns));
        for (Index s = 0; s < ns; ++s)
            out[static_cast<std::size_t>(s)] = symbol(0.0, table.xi_at(s), table.xi_norm[static_cast<std::size_t>(s)]);
        return out;
    }
    std::vector<Complex> out(static_cast<std::size_t>(g.points()));
    for (Index n = 0; n < g.nt; ++n) {
        const double tau = table.tau[static_cast<std::size_t>(n)];
        for (Index s = 0; s < ns; ++s)
            out[static_cast<std::size_t>(n * ns + s)] = symbol(tau, table.xi_at(s), table.xi_norm[static_cast<std::size_t>(s)]);
    }
    return out;
}

void multiply(Eigen::VectorXcd& buf, const std::vector<Complex>& tab, Index ns)
{
    if (static_cast<Index>(tab.size()) == buf.size()) {
        for (Index i = 0; i < buf.size(); ++i) buf[i] *= tab[static_cast<std::size_t>(i)];
        return;
    }
    const Index nt = buf.size() / ns;
    for (Index n = 0; n < nt; ++n)
        for (Index s = 0; s < ns; ++s) buf[n * ns + s] *= tab[static_cast<std::size_t>(s)];
}

template <class Scalar>
void store(BasicField<Scalar>& out, int c, const Eigen::VectorXcd& buf)
{
    if constexpr (is_complex_v<Scalar>)
        out.mutable_samples().col(c) = buf;
    else
        out.mutable_samples().col(c) = buf.real();
}

template void store(BasicField<double>&, int, const Eigen::VectorXcd&);
template void store(BasicField<Complex>&, int, const Eigen::VectorXcd&);

}  // namespace detail

template <class Scalar>
SpectralField forward_transform(const BasicField<Scalar>& f)
{
    const GridSpec& g = f.grid();
    SpectralField out{g, f.rank(), Eigen::MatrixXcd(g.points(), f.components())};
    const double w = g.cell_volume();
    for (int c = 0; c < f.components(); ++c) {
        Eigen::VectorXcd col = f.samples().col(c).template cast<Complex>();
        out.coefficients.col(c) = w * detail::spectrum_of(g, col);
    }
    return out;
}

template <class Scalar>
BasicField<Scalar> inverse_transform(const SpectralField& fh)
{
    const GridSpec& g = fh.grid;
    BasicField<Scalar> out(g, fh.rank);
    const double w = 1.0 / g.cell_volume();
    for (int c = 0; c < static_cast<int>(fh.coefficients.cols()); ++c) {
        Eigen::VectorXcd buf = w * fh.coefficients.col(c);
        detail::invert_in_place(g, buf);
        detail::store(out, c, buf);
    }
    return out;
}

template <class Scalar>
double physical_energy(const BasicField<Scalar>& f)
{
    double sum = 0.0;
    for (int c = 0; c < f.components(); ++c)
        for (Index i = 0; i < f.points(); ++i) sum += std::norm(Complex(f.samples()(i, c)));
    return sum * f.grid().cell_volume();
}

double spectral_energy(const SpectralField& fh)
{
    double sum = 0.0;
    for (Index c = 0; c < fh.coefficients.cols(); ++c)
        for (Index i = 0; i < fh.coefficients.rows(); ++i) sum += std::norm(fh.coefficients(i, c));
    return sum / (fh.grid.T * std::pow(fh.grid.L, fh.grid.d));
}

Complex MultiplierSymbol::operator()(double tau, std::span<const double> xi, double xi_norm) const
{
    switch (kind) {
    case Kind::spacetime:
        if (tau == 0.0 && xi_norm == 0.0) return zero_mode_value;
        return spacetime_fn(tau, xi);
    case Kind::spatial:
        if (xi_norm == 0.0) return zero_mode_value;
        return spatial_fn(xi);
    case Kind::homogeneous0: {
        if (xi_norm == 0.0) return zero_mode_value;
        double unit[8];
        for (std::size_t a = 0; a < xi.size(); ++a) unit[a] = xi[a] / xi_norm;
        return sphere_fn(std::span<const double>(unit, xi.size()));
    }
    }
    return zero_mode_value;
}

Complex MultiplierSymbol::operator()(double tau, std::span<const double> xi) const
{
    double sq = 0.0;
    for (double v : xi) sq += v * v;
    return (*this)(tau, xi, std::sqrt(sq));
}

MultiplierSymbol spacetime_symbol(std::function<Complex(double, std::span<const double>)> fn, Complex zero_mode,
                                  std::string name)
{
    MultiplierSymbol s;
    s.kind = MultiplierSymbol::Kind::spacetime;
    s.spacetime_fn = std::move(fn);
    s.zero_mode_value = zero_mode;
    s.name = std::move(name);
    return s;
}

MultiplierSymbol spatial_symbol(std::function<Complex(std::span<const double>)> fn, Complex zero_mode, std::string name)
{
    MultiplierSymbol s;
    s.kind = MultiplierSymbol::Kind::spatial;
    s.spatial_fn = std::move(fn);
    s.zero_mode_value = zero_mode;
    s.name = std::move(name);
    return s;
}

MultiplierSymbol homogeneous_symbol(SphereFunction sigma0, Complex zero_mode, std::string name)
{
    MultiplierSymbol s;
    s.kind = MultiplierSymbol::Kind::homogeneous0;
    s.sphere_fn = std::move(sigma0);
    s.zero_mode_value = zero_mode;
    s.name = std::move(name);
    return s;
}

namespace {

double squared(std::span<const double> xi)
{
    double sq = 0.0;
    for (double v : xi) sq += v * v;
    return sq;
}

}  // namespace

MultiplierSymbol named_symbol(std::string_view name, const SymbolParams& params)
{
    if (name == "heat") {
        if (params.t < 0.0) throw ValidationError("heat symbol: t must be >= 0");
        const double t = params.t;
        return spatial_symbol([t](std::span<const double> xi) { return Complex(std::exp(-squared(xi) * t)); }, 1.0, "heat");
    }
    if (name == "gauss") {
        if (params.theta < 0.0) throw ValidationError("gauss symbol: theta must be >= 0");
        const double th2 = params.theta * params.theta;
        return spacetime_symbol(
            [th2](double tau, std::span<const double> xi) {
                const double x2 = squared(xi);
                return Complex(std::exp(-th2 * (tau * tau + x2 * x2)));
            },
            1.0, "gauss");
    }
    if (name == "leray") {
        const int i = params.i;
        const int j = params.j;
        const double delta = i == j ? 1.0 : 0.0;
        return spatial_symbol(
            [i, j, delta](std::span<const double> xi) {
                return Complex(delta - xi[static_cast<std::size_t>(i)] * xi[static_cast<std::size_t>(j)] / squared(xi));
            },
            delta, "leray");
    }
    if (name == "riesz_j") {
        const int j = params.j;
        return homogeneous_symbol([j](std::span<const double> u) { return Complex(0.0, u[static_cast<std::size_t>(j)]); }, 0.0,
                                  "riesz_j");
    }
    if (name == "sigma0_const") {
        const Complex c = params.c;
        return homogeneous_symbol([c](std::span<const double>) { return c; }, 0.0, "sigma0_const");
    }
    throw ValidationError("unknown symbol '" + std::string(name) + "'");
}

template <class Scalar>
BasicField<Scalar> apply_multiplier(const BasicField<Scalar>& f, const MultiplierSymbol& symbol)
{
    const GridSpec& g = f.grid();
    const FrequencyTable table(g);
    const auto tab = detail::tabulate(table, symbol);
    BasicField<Scalar> out(g, f.rank(), f.support());
    for (int c = 0; c < f.components(); ++c) {
        Eigen::VectorXcd buf = detail::spectrum_of(g, f.samples().col(c).template cast<Complex>());
        detail::multiply(buf, tab, g.spatial_points());
        detail::invert_in_place(g, buf);
        detail::store(out, c, buf);
    }
    return out;
}

template <class Scalar>
SpaceSlice<Scalar> heat_propagate(const SpaceSlice<Scalar>& slice, double t)
{
    if (t < 0.0) throw ValidationError("heat_propagate: t must be >= 0");
    const GridSpec& g = slice.grid;
    const FrequencyTable table(g);
    const auto dims = g.spatial_dims();
    SpaceSlice<Scalar> out = slice;
    for (Index c = 0; c < slice.samples.cols(); ++c) {
        Eigen::VectorXcd buf = slice.samples.col(c).template cast<Complex>();
        fft::c2c(dims, 1, buf.data(), buf.data(), fft::Direction::forward);
        for (Index s = 0; s < buf.size(); ++s) {
            const double x = table.xi_norm[static_cast<std::size_t>(s)];
            buf[s] *= std::exp(-x * x * t);
        }
        fft::c2c(dims, 1, buf.data(), buf.data(), fft::Direction::backward);
        buf /= static_cast<double>(g.spatial_points());
        if constexpr (is_complex_v<Scalar>)
            out.samples.col(c) = buf;
        else
            out.samples.col(c) = buf.real();
    }
    return out;
}

template <class Scalar>
BasicField<Scalar> heat_propagate(const BasicField<Scalar>& f, double t)
{
    if (t < 0.0) throw ValidationError("heat_propagate: t must be >= 0");
    return apply_multiplier(f, named_symbol("heat", {.t = t}));
}

template <class Scalar>
BasicField<Scalar> gauss_flow(const BasicField<Scalar>& f, double theta)
{
    if (theta < 0.0) throw ValidationError("gauss_flow: theta must be >= 0");
    if (theta == 0.0) return f;
    return apply_multiplier(f, named_symbol("gauss", {.theta = theta}));
}

template <class Scalar>
BasicField<Scalar> leray_project(const BasicField<Scalar>& v)
{
    if (v.rank() != Rank::vector) throw ValidationError("leray_project: rank must be vector");
    const GridSpec& g = v.grid();
    const int d = g.d;
    const FrequencyTable table(g);
    std::vector<Eigen::VectorXcd> spec(static_cast<std::size_t>(d));
    for (int c = 0; c < d; ++c) spec[static_cast<std::size_t>(c)] = detail::spectrum_of(g, v.samples().col(c).template cast<Complex>());
    const Index ns = g.spatial_points();
    for (Index n = 0; n < g.nt; ++n) {
        for (Index s = 0; s < ns; ++s) {
            const double xn = table.xi_norm[static_cast<std::size_t>(s)];
            if (xn == 0.0) continue;
            const auto xi = table.xi_at(s);
            const Index i = n * ns + s;
            Complex dot = 0.0;
            for (int a = 0; a < d; ++a) dot += xi[static_cast<std::size_t>(a)] * spec[static_cast<std::size_t>(a)][i];
            dot /= xn * xn;
            for (int a = 0; a < d; ++a) spec[static_cast<std::size_t>(a)][i] -= xi[static_cast<std::size_t>(a)] * dot;
        }
    }
    BasicField<Scalar> out(g, Rank::vector, v.support());
    for (int c = 0; c < d; ++c) {
        detail::invert_in_place(g, spec[static_cast<std::size_t>(c)]);
        detail::store(out, c, spec[static_cast<std::size_t>(c)]);
    }
    return out;
}

template <class Scalar>
BasicField<Scalar> apply_sigma(const BasicField<Scalar>& f, const MultiplierSymbol& sigma)
{
    if (sigma.kind != MultiplierSymbol::Kind::homogeneous0)
        throw ValidationError("apply_sigma: symbol must be homogeneous of degree 0");
    const FrequencyTable table(f.grid());
    const auto tab = detail::tabulate(table, sigma);
    for (const Complex& v : tab)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw ValidationError("apply_sigma: symbol undefined on sphere sample");
    return apply_multiplier(f, sigma);
}

template <class Scalar>
BasicField<Scalar> apply_sigma(const BasicField<Scalar>& f, const SphereFunction& sigma0, Complex zero_mode)
{
    return apply_sigma(f, homogeneous_symbol(sigma0, zero_mode));
}

template <class Scalar>
BasicField<Scalar> partial_space(const BasicField<Scalar>& f, int axis)
{
    if (axis < 0 || axis >= f.grid().d) throw ValidationError("partial_space: axis out of range");
    const auto a = static_cast<std::size_t>(axis);
    return apply_multiplier(f, spatial_symbol([a](std::span<const double> xi) { return Complex(0.0, xi[a]); }, 0.0, "d_x"));
}

template <class Scalar>
BasicField<Scalar> partial_time(const BasicField<Scalar>& f)
{
    return apply_multiplier(f, spacetime_symbol([](double tau, std::span<const double>) { return Complex(0.0, tau); }, 0.0, "d_t"));
}

template <class Scalar>
BasicField<Scalar> laplacian(const BasicField<Scalar>& f)
{
    return apply_multiplier(f, spatial_symbol([](std::span<const double> xi) { return Complex(-squared(xi)); }, 0.0, "laplacian"));
}

template <class Scalar>
BasicField<Scalar> gradient(const BasicField<Scalar>& f)
{
    const GridSpec& g = f.grid();
    const int d = g.d;
    Rank out_rank;
    if (f.rank() == Rank::scalar)
        out_rank = Rank::vector;
    else if (f.rank() == Rank::vector)
        out_rank = Rank::tensor;
    else
        throw ValidationError("gradient: tensor input not supported");
    const FrequencyTable table(g);
    const Index ns = g.spatial_points();
    BasicField<Scalar> out(g, out_rank, f.support());
    for (int c = 0; c < f.components(); ++c) {
        const Eigen::VectorXcd spec = detail::spectrum_of(g, f.samples().col(c).template cast<Complex>());
        for (int j = 0; j < d; ++j) {
            Eigen::VectorXcd buf = spec;
            for (Index n = 0; n < g.nt; ++n)
                for (Index s = 0; s < ns; ++s) buf[n * ns + s] *= Complex(0.0, table.xi[static_cast<std::size_t>(s * d + j)]);
            detail::invert_in_place(g, buf);
            detail::store(out, c * d + j, buf);
        }
    }
    return out;
}

template <class Scalar>
BasicField<Scalar> divergence(const BasicField<Scalar>& f)
{
    const GridSpec& g = f.grid();
    const int d = g.d;
    Rank out_rank;
    int rows;
    if (f.rank() == Rank::vector) {
        out_rank = Rank::scalar;
        rows = 1;
    } else if (f.rank() == Rank::tensor) {
        out_rank = Rank::vector;
        rows = d;
    } else {
        throw ValidationError("divergence: rank must be vector or tensor");
    }
    const FrequencyTable table(g);
    const Index ns = g.spatial_points();
    BasicField<Scalar> out(g, out_rank, f.support());
    for (int i = 0; i < rows; ++i) {
        Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(g.points());
        for (int j = 0; j < d; ++j) {
            const Eigen::VectorXcd spec = detail::spectrum_of(g, f.samples().col(i * d + j).template cast<Complex>());
            for (Index n = 0; n < g.nt; ++n)
                for (Index s = 0; s < ns; ++s)
                    acc[n * ns + s] += Complex(0.0, table.xi[static_cast<std::size_t>(s * d + j)]) * spec[n * ns + s];
        }
        detail::invert_in_place(g, acc);
        detail::store(out, i, acc);
    }
    return out;
}

SpaceSlice<double> multiplier_kernel(const GridSpec& grid, const MultiplierSymbol& symbol)
{
    if (symbol.kind == MultiplierSymbol::Kind::spacetime) throw ValidationError("multiplier_kernel: spatial symbol required");
    const FrequencyTable table(grid);
    const Index ns = grid.spatial_points();
    Eigen::VectorXcd buf(ns);
    for (Index s = 0; s < ns; ++s) {
        // Shift so the kernel is centred on the origin index.
        double phase = 0.0;
        for (int a = 0; a < grid.d; ++a) phase += table.xi[static_cast<std::size_t>(s * grid.d + a)] * grid.space_origin() * grid.dx();
        buf[s] = symbol(0.0, table.xi_at(s), table.xi_norm[static_cast<std::size_t>(s)]) * std::polar(1.0, -phase);
    }
    const auto dims = grid.spatial_dims();
    fft::c2c(dims, 1, buf.data(), buf.data(), fft::Direction::backward);
    buf /= std::pow(grid.L, grid.d);
    SpaceSlice<double> out{grid, Rank::scalar, buf.real()};
    return out;
}

template <class Scalar>
BasicField<Scalar> dealias(const BasicField<Scalar>& f)
{
    const GridSpec& g = f.grid();
    const int cutoff = g.nx / 3;
    const double scale = g.L / (2.0 * std::numbers::pi);
    return apply_multiplier(f, spatial_symbol(
                                   [cutoff, scale](std::span<const double> xi) {
                                       for (double x : xi)
                                           if (std::abs(x) * scale > cutoff + 0.5) return Complex(0.0);
                                       return Complex(1.0);
                                   },
                                   1.0, "dealias"));
}

#define PK_SPECTRAL_INSTANTIATE(S)                                                                              \
    template SpectralField forward_transform(const BasicField<S>&);                                             \
    template BasicField<S> inverse_transform<S>(const SpectralField&);                                          \
    template double physical_energy(const BasicField<S>&);                                                      \
    template BasicField<S> apply_multiplier(const BasicField<S>&, const MultiplierSymbol&);                     \
    template SpaceSlice<S> heat_propagate(const SpaceSlice<S>&, double);                                        \
    template BasicField<S> heat_propagate(const BasicField<S>&, double);                                        \
    template BasicField<S> gauss_flow(const BasicField<S>&, double);                                            \
    template BasicField<S> leray_project(const BasicField<S>&);                                                 \
    template BasicField<S> apply_sigma(const BasicField<S>&, const MultiplierSymbol&);                          \
    template BasicField<S> apply_sigma(const BasicField<S>&, const SphereFunction&, Complex);                   \
    template BasicField<S> partial_space(const BasicField<S>&, int);                                            \
    template BasicField<S> partial_time(const BasicField<S>&);                                                  \
    template BasicField<S> laplacian(const BasicField<S>&);                                                     \
    template BasicField<S> gradient(const BasicField<S>&);                                                      \
    template BasicField<S> divergence(const BasicField<S>&);                                                    \
    template BasicField<S> dealias(const BasicField<S>&);

PK_SPECTRAL_INSTANTIATE(double)
PK_SPECTRAL_INSTANTIATE(Complex)

#undef PK_SPECTRAL_INSTANTIATE

}  // namespace pk
