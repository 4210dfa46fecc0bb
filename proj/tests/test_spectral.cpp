#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "parakrylov/presets.hpp"
#include "parakrylov/spectral.hpp"

using namespace pk;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

ComplexField random_complex(const GridSpec& g, std::uint64_t seed, Rank rank = Rank::scalar, int modes = 3)
{
    return sample_preset<Complex>(RandomBandlimitedPreset{seed, modes, 1.0}, g, rank);
}

Field random_real(const GridSpec& g, std::uint64_t seed, Rank rank = Rank::scalar, int modes = 3)
{
    return sample_preset<double>(RandomBandlimitedPreset{seed, modes, 1.0}, g, rank);
}

double max_diff(const ComplexField& a, const ComplexField& b) { return (a.samples() - b.samples()).cwiseAbs().maxCoeff(); }
double max_diff(const Field& a, const Field& b) { return (a.samples() - b.samples()).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("transform pair is an exact inverse")
{
    const GridSpec g = build_grid(2, 16, 16, 1.3, 0.7);
    const auto f = random_complex(g, 1, Rank::vector);
    const auto back = inverse_transform<Complex>(forward_transform(f));
    CHECK(max_diff(back, f) <= 1e-12 * max_abs(f));
    const auto r = random_real(g, 2);
    CHECK(max_diff(inverse_transform<double>(forward_transform(r)), r) <= 1e-12 * max_abs(r));
}

TEST_CASE("forward transform agrees with a direct DFT")
{
    const GridSpec g = build_grid(1, 8, 8, 2.0, 0.5);
    const auto f = random_complex(g, 3, Rank::scalar, 2);
    const auto fh = forward_transform(f);
    double err = 0.0;
    for (int w = -4; w < 4; ++w)
        for (int k = -4; k < 4; ++k) {
            const std::vector<int> kk{k};
            err = std::max(err, std::abs(fh.coefficient(w, kk) - oracle::direct_coefficient(f, w, kk)));
        }
    CHECK(err < 1e-12);
}

TEST_CASE("a single mode has a single coefficient")
{
    const GridSpec g = build_grid(2, 8, 8, 1.0, 1.0);
    const auto m = sample_preset<Complex>(ModePreset{2, {1, -3}}, g);
    const auto fh = forward_transform(m);
    double peak = 0.0, rest = 0.0;
    for (Index i = 0; i < fh.coefficients.rows(); ++i) {
        const double v = std::abs(fh.coefficients(i, 0));
        if (v > 0.5 * g.T * g.L * g.L)
            peak += 1.0;
        else
            rest = std::max(rest, v);
    }
    CHECK(peak == 1.0);
    CHECK(rest < 1e-12);
    const std::vector<int> k{1, -3};
    CHECK(std::abs(fh.coefficient(2, k)) == doctest::Approx(g.T * g.L * g.L).epsilon(1e-12));
}

TEST_CASE("Parseval against direct double summation")
{
    const GridSpec g = build_grid(1, 8, 8, 1.7, 0.9);
    const auto f = random_complex(g, 11, Rank::scalar, 3);
    double physical = 0.0;
    for (Index i = 0; i < f.points(); ++i) physical += std::norm(f.samples()(i, 0));
    physical *= g.cell_volume();
    double spectral = 0.0;
    for (int w = -4; w < 4; ++w)
        for (int k = -4; k < 4; ++k) spectral += std::norm(oracle::direct_coefficient(f, w, {k}));
    spectral /= g.T * g.L;
    CHECK(std::abs(physical - spectral) <= 1e-10 * physical);
    CHECK(std::abs(physical_energy(f) - spectral_energy(forward_transform(f))) <= 1e-10 * physical);
}

TEST_CASE("heat_propagate acts by its symbol")
{
    const GridSpec g = build_grid(3, 8, 8, kTwoPi, 1.0);
    const auto m = sample_preset<Complex>(ModePreset{0, {1, 0, 0}}, g);
    const auto h = heat_propagate(time_slice(m, 0), 1.0);
    CHECK((h.samples - std::exp(-1.0) * time_slice(m, 0).samples).cwiseAbs().maxCoeff() < 1e-13);

    const auto c = sample_preset<double>(ConstantPreset{2.5}, g);
    for (double t : {0.0, 0.3, 10.0}) CHECK((heat_propagate(time_slice(c, 3), t).samples.array() - 2.5).abs().maxCoeff() < 1e-13);

    const auto r = random_real(g, 4, Rank::scalar, 3) + sample_preset<double>(ConstantPreset{0.7}, g);
    const auto slice = time_slice(r, 2);
    const double mean = slice.samples.mean();
    CHECK(std::abs(heat_propagate(slice, 0.05).samples.mean() - mean) <= 1e-12 * std::abs(mean));
    CHECK_THROWS_AS(heat_propagate(slice, -1.0), ValidationError);
}

TEST_CASE("gauss_flow symbol, identity and semigroup law")
{
    const GridSpec g = build_grid(2, 16, 16, 1.0, 2.0);
    const auto f = random_complex(g, 5);
    CHECK(max_diff(gauss_flow(f, 0.0), f) == 0.0);
    CHECK_THROWS_AS(gauss_flow(f, -0.1), ValidationError);

    const double theta = 0.02;
    const auto m = sample_preset<Complex>(ModePreset{3, {2, -1}}, g);
    const double tau = kTwoPi * 3 / g.T;
    const double xi2 = std::pow(kTwoPi / g.L, 2) * 5.0;
    const double want = std::exp(-theta * theta * (tau * tau + xi2 * xi2));
    CHECK(max_diff(gauss_flow(m, theta), want * m) < 1e-13);

    const double t1 = 0.01, t2 = 0.015;
    const auto two = gauss_flow(gauss_flow(f, t1), t2);
    const auto one = gauss_flow(f, std::hypot(t1, t2));
    CHECK(max_diff(two, one) <= 1e-12 * max_abs(f));
}

TEST_CASE("gauss_flow sup norm is non-increasing for mean-free fields")
{
    const GridSpec g = build_grid(2, 16, 16, 1.0, 1.0);
    const auto f = random_real(g, 6, Rank::scalar, 5);
    double prev = max_abs(f);
    for (double theta = 1e-4; theta < 1.0; theta *= 2.0) {
        const double v = max_abs(gauss_flow(f, theta));
        CHECK(v <= prev * (1.0 + 1e-12));
        prev = v;
    }
}

TEST_CASE("leray projector")
{
    const GridSpec g = build_grid(3, 16, 8, 1.0, 1.0);
    const auto potential = random_real(g, 7);
    const auto grad = gradient(potential);
    CHECK(max_abs(leray_project(grad)) <= 1e-12 * max_abs(grad));

    // curl of a vector potential is solenoidal
    const auto a = random_real(g, 8, Rank::vector);
    const auto curl = stack<double>({partial_space(component_field(a, 2), 1) - partial_space(component_field(a, 1), 2),
                                     partial_space(component_field(a, 0), 2) - partial_space(component_field(a, 2), 0),
                                     partial_space(component_field(a, 1), 0) - partial_space(component_field(a, 0), 1)},
                                    Rank::vector);
    CHECK(max_diff(leray_project(curl), curl) <= 1e-12 * max_abs(curl));

    const auto v = random_real(g, 9, Rank::vector);
    const auto pv = leray_project(v);
    CHECK(max_abs(divergence(pv)) <= 1e-12 * max_abs(v) * (kTwoPi * 3 / g.L));
    CHECK(max_diff(leray_project(pv), pv) <= 1e-12 * max_abs(v));
    CHECK_THROWS_AS(leray_project(potential), ValidationError);

    const auto c = sample_preset<double>(ConstantPreset{1.5}, g, Rank::vector);
    CHECK(max_diff(leray_project(c), c) < 1e-14);
}

TEST_CASE("apply_sigma symbol calculus")
{
    const GridSpec g = build_grid(2, 16, 16, 1.0, 1.0);
    const auto f = random_real(g, 10) + sample_preset<double>(ConstantPreset{0.4}, g);

    const auto one = apply_sigma(f, named_symbol("sigma0_const"));
    Field minus_mean = f;
    const Index ns = g.spatial_points();
    for (Index n = 0; n < g.nt; ++n) {
        auto rows = minus_mean.mutable_samples().middleRows(n * ns, ns);
        rows.array() -= rows.mean();
    }
    CHECK(max_diff(one, minus_mean) < 1e-12);

    const auto fc = to_complex(f);
    for (int j = 0; j < 2; ++j) {
        const auto twice = apply_sigma(apply_sigma(fc, named_symbol("riesz_j", {.j = j})), named_symbol("riesz_j", {.j = j}));
        const auto once = apply_sigma(fc, [j](std::span<const double> u) {
            return Complex(-u[static_cast<std::size_t>(j)] * u[static_cast<std::size_t>(j)]);
        });
        CHECK(max_diff(twice, once) < 1e-12);
    }

    // Leray through degree-0 components: (Pv)_i = sum_j (delta_ij - u_i u_j) v_j,
    // with the xi = 0 mode kept.
    const auto v = random_real(g, 12, Rank::vector) + sample_preset<double>(ConstantPreset{0.3}, g, Rank::vector);
    std::vector<Field> parts;
    for (int i = 0; i < 2; ++i) {
        Field acc(g, Rank::scalar);
        for (int j = 0; j < 2; ++j) {
            const double delta = i == j ? 1.0 : 0.0;
            acc = acc + apply_sigma(component_field(v, j), [i, j, delta](std::span<const double> u) {
                      return Complex(delta - u[static_cast<std::size_t>(i)] * u[static_cast<std::size_t>(j)]);
                  }, delta);
        }
        parts.push_back(acc);
    }
    CHECK(max_diff(stack(parts, Rank::vector), leray_project(v)) < 1e-12);

    CHECK_THROWS_AS(apply_sigma(f, named_symbol("heat", {.t = 0.1})), ValidationError);
    CHECK_THROWS_AS(apply_sigma(f, [](std::span<const double>) { return Complex(NAN); }), ValidationError);
    CHECK_THROWS_AS(named_symbol("nope"), ValidationError);
}

TEST_CASE("homogeneous symbols are invariant along rays")
{
    const auto s = named_symbol("riesz_j", {.j = 1});
    for (double lam : {0.1, 1.0, 7.5, 300.0}) {
        const double xi[3] = {0.3 * lam, -1.2 * lam, 0.5 * lam};
        const double base[3] = {0.3, -1.2, 0.5};
        CHECK(std::abs(s(0.0, xi) - s(0.0, base)) < 1e-15);
    }
}

TEST_CASE("multipliers commute with lattice translations")
{
    const GridSpec g = build_grid(2, 16, 16, 1.0, 1.0);
    const auto f = random_real(g, 13, Rank::vector);
    const std::vector<Index> off{3, -5, 7};
    CHECK(max_diff(cyclic_shift(gauss_flow(f, 0.01), off), gauss_flow(cyclic_shift(f, off), 0.01)) < 1e-12);
    CHECK(max_diff(cyclic_shift(heat_propagate(f, 0.001), off), heat_propagate(cyclic_shift(f, off), 0.001)) < 1e-12);
    CHECK(max_diff(cyclic_shift(leray_project(f), off), leray_project(cyclic_shift(f, off))) < 1e-12);
    const auto r = named_symbol("riesz_j", {.j = 0});
    CHECK(max_diff(cyclic_shift(apply_sigma(to_complex(f), r), off), apply_sigma(to_complex(cyclic_shift(f, off)), r)) < 1e-12);
}

TEST_CASE("spectral derivatives of a mode")
{
    const GridSpec g = build_grid(2, 16, 16, 1.5, 0.5);
    const auto m = sample_preset<Complex>(ModePreset{2, {1, -3}}, g);
    const double tau = kTwoPi * 2 / g.T;
    const double x0 = kTwoPi * 1 / g.L, x1 = kTwoPi * -3 / g.L;
    const double tol = 1e-12 * std::pow(kTwoPi * 3 / g.L, 2);
    auto scaled = [&](Complex a) { return ComplexField(g, Rank::scalar, (a * m.samples().array()).matrix()); };
    CHECK(max_diff(partial_time(m), scaled(Complex(0, tau))) < 1e-12 * tau);
    CHECK(max_diff(partial_space(m, 1), scaled(Complex(0, x1))) < tol);
    CHECK(max_diff(laplacian(m), scaled(-(x0 * x0 + x1 * x1))) < tol);
    const auto gm = gradient(m);
    CHECK(gm.rank() == Rank::vector);
    CHECK(max_diff(component_field(gm, 0), scaled(Complex(0, x0))) < tol);
    const auto dv = divergence(gm);
    CHECK(max_diff(dv, laplacian(m)) < tol);
    CHECK_THROWS_AS(partial_space(m, 2), ValidationError);
}

TEST_CASE("dealias keeps low modes and removes high ones")
{
    const GridSpec g = build_grid(2, 16, 8, 1.0, 1.0);
    const auto low = sample_preset<Complex>(ModePreset{1, {5, -5}}, g);
    const auto high = sample_preset<Complex>(ModePreset{1, {6, 0}}, g);
    CHECK(max_diff(dealias(low), low) < 1e-13);
    CHECK(max_abs(dealias(high)) < 1e-13);
}

TEST_CASE("derivative of sigma(D) heat kernel decays like |x|^-(d+1)")
{
    const GridSpec g = build_grid(2, 512, 8, 1.0, 1.0);
    const double theta = 2.0 * g.dx();
    const double t = theta * theta;
    // d_1 R_1 R_2 e^{t Delta}: symbol i xi_1 (xi_1 xi_2 / |xi|^2) e^{-t |xi|^2}
    const auto sym = spatial_symbol(
        [t](std::span<const double> xi) {
            const double q = xi[0] * xi[0] + xi[1] * xi[1];
            return Complex(0.0, xi[0]) * (xi[0] * xi[1] / q) * std::exp(-t * q);
        },
        0.0);
    const auto k = multiplier_kernel(g, sym);
    // Radial envelope: max |K| over thin annuli between 8 theta and L/5.
    std::vector<double> radii, env;
    std::vector<Index> idx;
    for (double r = 8.0 * theta; r < g.L / 5.0; r *= 1.25) {
        double best = 0.0;
        for (Index s = 0; s < g.spatial_points(); ++s) {
            unflatten_spatial(s, g, idx);
            const double x = (idx[0] - g.space_origin()) * g.dx();
            const double y = (idx[1] - g.space_origin()) * g.dx();
            const double rr = std::hypot(x, y);
            if (rr >= r && rr < 1.25 * r) best = std::max(best, std::abs(k.samples(s, 0)));
        }
        radii.push_back(r);
        env.push_back(best);
    }
    const double slope = -oracle::loglog_slope(radii, env);
    MESSAGE("kernel decay exponent " << slope);
    CHECK(slope >= g.d + 0.8);
}
