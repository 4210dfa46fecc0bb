#include "parakrylov/presets.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "fft.hpp"

namespace pk {

double parabolic_unit_ball_measure(int d)
{
    // |{sqrt|t| + |x| < 1}| = 2 int_0^1 V_d (1 - sqrt t)^d dt = 4 V_d / ((d + 1)(d + 2)).
    const double vd = std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
    return 4.0 * vd / ((d + 1.0) * (d + 2.0));
}

double periodic_gap(double a, double b, double period)
{
    double g = std::fmod(a - b, period);
    if (g < -0.5 * period) g += period;
    if (g >= 0.5 * period) g -= period;
    return g;
}

namespace {

void check_mode_range(int m, int n, const char* axis)
{
    if (std::abs(m) >= n / 2) throw ValidationError(std::string("preset: mode beyond Nyquist on ") + axis + " axis");
}

std::vector<double> coordinates(const GridSpec& g, Index n, Index s, std::vector<Index>& idx)
{
    unflatten_spatial(s, g, idx);
    std::vector<double> z(static_cast<std::size_t>(g.d) + 1);
    z[0] = g.time_at(n);
    for (int a = 0; a < g.d; ++a) z[static_cast<std::size_t>(a) + 1] = g.coord_at(idx[static_cast<std::size_t>(a)]);
    return z;
}

template <class Scalar, class Fn>
BasicField<Scalar> tabulate(const GridSpec& g, Rank rank, Fn&& fn)
{
    BasicField<Scalar> out(g, rank);
    const Index ns = g.spatial_points();
    std::vector<Index> idx;
    for (Index n = 0; n < g.nt; ++n)
        for (Index s = 0; s < ns; ++s) {
            const Scalar v = fn(coordinates(g, n, s, idx));
            out.mutable_samples().row(n * ns + s).setConstant(v);
        }
    return out;
}

template <class Scalar>
Scalar narrow(Complex v)
{
    if constexpr (is_complex_v<Scalar>)
        return v;
    else
        return v.real();
}

Eigen::VectorXcd random_spectrum(const GridSpec& g, std::uint64_t seed, int component, int max_mode, bool hermitian)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(component)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));

    Eigen::VectorXcd spec = Eigen::VectorXcd::Zero(g.points());
    std::vector<bool> filled(static_cast<std::size_t>(g.points()), false);
    const int side = 2 * max_mode + 1;
    Index box = 1;
    for (int a = 0; a <= g.d; ++a) box *= side;
    std::vector<int> m(static_cast<std::size_t>(g.d) + 1);
    std::vector<Index> idx(static_cast<std::size_t>(g.d));
    auto flat = [&](int sign) {
        idx.assign(static_cast<std::size_t>(g.d), 0);
        for (int a = 0; a < g.d; ++a) idx[static_cast<std::size_t>(a)] = sign * m[static_cast<std::size_t>(a) + 1];
        return wrap_index(sign * m[0], g.nt) * g.spatial_points() + flatten_spatial(idx, g);
    };
    for (Index b = 0; b < box; ++b) {
        Index r = b;
        bool zero = true;
        for (int a = g.d; a >= 0; --a) {
            m[static_cast<std::size_t>(a)] = static_cast<int>(r % side) - max_mode;
            r /= side;
            zero = zero && m[static_cast<std::size_t>(a)] == 0;
        }
        if (zero) continue;
        const Index i = flat(1);
        if (filled[static_cast<std::size_t>(i)]) continue;
        const Complex c(normal(rng), normal(rng));
        spec[i] = c;
        filled[static_cast<std::size_t>(i)] = true;
        if (hermitian) {
            const Index j = flat(-1);
            spec[j] = std::conj(c);
            filled[static_cast<std::size_t>(j)] = true;
        }
    }
    const double energy = spec.squaredNorm();
    if (energy > 0.0) spec /= std::sqrt(energy);
    return spec;
}

}  // namespace

template <class Scalar>
BasicField<Scalar> sample_preset(const Preset& preset, const GridSpec& g, Rank rank)
{
    validate(g);
    return std::visit(
        [&](const auto& p) -> BasicField<Scalar> {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, ZeroPreset>) {
                return BasicField<Scalar>(g, rank);
            } else if constexpr (std::is_same_v<P, ConstantPreset>) {
                BasicField<Scalar> out(g, rank);
                out.mutable_samples().setConstant(narrow<Scalar>(p.a));
                return out;
            } else if constexpr (std::is_same_v<P, ModePreset>) {
                if constexpr (!is_complex_v<Scalar>) {
                    throw ValidationError("preset: mode requires a complex field");
                } else {
                    if (static_cast<int>(p.k.size()) != g.d) throw ValidationError("preset: mode needs d wave numbers");
                    check_mode_range(p.omega, g.nt, "time");
                    for (int k : p.k) check_mode_range(k, g.nx, "space");
                    const double two_pi = 2.0 * std::numbers::pi;
                    return tabulate<Scalar>(g, rank, [&](const std::vector<double>& z) {
                        double phase = two_pi * p.omega * z[0] / g.T;
                        for (int a = 0; a < g.d; ++a) phase += two_pi * p.k[static_cast<std::size_t>(a)] * z[static_cast<std::size_t>(a) + 1] / g.L;
                        return Scalar(p.amplitude * std::polar(1.0, phase));
                    });
                }
            } else if constexpr (std::is_same_v<P, GaussianPreset>) {
                const auto n = static_cast<std::size_t>(g.d) + 1;
                if (p.center.size() != n || p.widths.size() != n) throw ValidationError("preset: gaussian needs d+1 center and width entries");
                for (double w : p.widths)
                    if (!(w > 0.0)) throw ValidationError("preset: gaussian widths must be positive");
                return tabulate<Scalar>(g, rank, [&](const std::vector<double>& z) {
                    double e = 0.0;
                    for (std::size_t a = 0; a < n; ++a) {
                        const double gap = periodic_gap(z[a], p.center[a], a == 0 ? g.T : g.L) / p.widths[a];
                        e += gap * gap;
                    }
                    return Scalar(p.amplitude * std::exp(-0.5 * e));
                });
            } else if constexpr (std::is_same_v<P, ParabolicIndicatorPreset>) {
                const auto n = static_cast<std::size_t>(g.d) + 1;
                if (p.center.size() != n) throw ValidationError("preset: indicator needs d+1 center entries");
                if (!(p.r > 0.0) || p.r > 0.5 * g.L || p.r * p.r > 0.5 * g.T)
                    throw ValidationError("preset: indicator radius exceeds half-period");
                return tabulate<Scalar>(g, rank, [&](const std::vector<double>& z) {
                    double sq = 0.0;
                    for (std::size_t a = 1; a < n; ++a) {
                        const double gap = periodic_gap(z[a], p.center[a], g.L);
                        sq += gap * gap;
                    }
                    const double rho = std::sqrt(std::abs(periodic_gap(z[0], p.center[0], g.T))) + std::sqrt(sq);
                    return Scalar(rho < p.r ? p.amplitude : 0.0);
                });
            } else {
                if (p.max_mode < 1) throw ValidationError("preset: max_mode must be >= 1");
                check_mode_range(p.max_mode, g.nt, "time");
                check_mode_range(p.max_mode, g.nx, "space");
                BasicField<Scalar> out(g, rank);
                const auto dims = g.dims();
                for (int c = 0; c < out.components(); ++c) {
                    Eigen::VectorXcd buf = random_spectrum(g, p.seed, c, p.max_mode, !is_complex_v<Scalar>);
                    fft::c2c(dims, 1, buf.data(), buf.data(), fft::Direction::backward);
                    buf *= p.amplitude;
                    if constexpr (is_complex_v<Scalar>)
                        out.mutable_samples().col(c) = buf;
                    else
                        out.mutable_samples().col(c) = buf.real();
                }
                return out;
            }
        },
        preset);
}

template Field sample_preset<double>(const Preset&, const GridSpec&, Rank);
template ComplexField sample_preset<Complex>(const Preset&, const GridSpec&, Rank);

}  // namespace pk
