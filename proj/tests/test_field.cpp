#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include "parakrylov/field_io.hpp"
#include "parakrylov/presets.hpp"

using namespace pk;

TEST_CASE("build_grid derives spacing and homogeneous dimension")
{
    const GridSpec g = build_grid(3, 16, 16, 2.0 * std::numbers::pi, 1.0);
    CHECK(g.dx() == doctest::Approx(std::numbers::pi / 8.0).epsilon(1e-15));
    CHECK(g.Q() == 5);
    CHECK(build_grid(1, 8, 8, 1.0, 1.0).Q() == 3);
}

TEST_CASE("build_grid rejects bad resolutions and extents")
{
    CHECK_THROWS_WITH_AS(build_grid(3, 0, 16, 1.0, 1.0), doctest::Contains("resolution"), ValidationError);
    CHECK_THROWS_WITH_AS(build_grid(2, 12, 16, 1.0, 1.0), doctest::Contains("resolution"), ValidationError);
    CHECK_THROWS_WITH_AS(build_grid(2, 16, 4, 1.0, 1.0), doctest::Contains("resolution"), ValidationError);
    CHECK_THROWS_WITH_AS(build_grid(2, 16, 16, 0.0, 1.0), doctest::Contains("extent"), ValidationError);
    CHECK_THROWS_WITH_AS(build_grid(2, 16, 16, 1.0, -1.0), doctest::Contains("extent"), ValidationError);
    CHECK_THROWS_AS(build_grid(0, 16, 16, 1.0, 1.0), ValidationError);
}

TEST_CASE("zero and mode presets")
{
    const GridSpec g = build_grid(3, 8, 8, 2.0, 1.0);
    const auto z = sample_preset<double>(ZeroPreset{}, g);
    CHECK(max_abs(z) == 0.0);

    const auto m = sample_preset<Complex>(ModePreset{1, {1, 0, 0}}, g);
    std::vector<Index> idx;
    double err = 0.0;
    for (Index n = 0; n < g.nt; ++n)
        for (Index s = 0; s < g.spatial_points(); ++s) {
            unflatten_spatial(s, g, idx);
            const double t = -0.5 * g.T + n * g.dt();
            const double x1 = -0.5 * g.L + idx[0] * g.dx();
            const Complex want = std::exp(Complex(0.0, 2.0 * std::numbers::pi * (t / g.T + x1 / g.L)));
            err = std::max(err, std::abs(m.at(n, s) - want));
        }
    CHECK(err < 1e-14);

    CHECK_THROWS_AS(sample_preset<Complex>(ModePreset{4, {0, 0, 0}}, g), ValidationError);
    CHECK_THROWS_AS(sample_preset<Complex>(ModePreset{0, {0, 5, 0}}, g), ValidationError);
    CHECK_THROWS_AS(sample_preset<Complex>(ModePreset{0, {0, 0}}, g), ValidationError);
}

TEST_CASE("parabolic indicator measure matches subsampled quadrature")
{
    const GridSpec g = build_grid(2, 64, 64, 1.0, 0.25);
    const double r = g.L / 4;
    const auto ind = sample_preset<double>(ParabolicIndicatorPreset{{0.0, 0.0, 0.0}, r}, g);
    const double measure = ind.samples().sum() * g.cell_volume();

    // Oracle: midpoint quadrature of the ball at 4x per-axis resolution over
    // the bounding box, independent of the lattice.
    const int m = 256;
    const double ht = 2.0 * r * r / m;
    const double hx = 2.0 * r / m;
    double count = 0.0;
    for (int a = 0; a < m; ++a) {
        const double t = -r * r + (a + 0.5) * ht;
        for (int b = 0; b < m; ++b) {
            const double x = -r + (b + 0.5) * hx;
            for (int c = 0; c < m; ++c) {
                const double y = -r + (c + 0.5) * hx;
                if (std::sqrt(std::abs(t)) + std::hypot(x, y) < r) count += 1.0;
            }
        }
    }
    const double oracle = count * ht * hx * hx;
    CHECK(oracle == doctest::Approx(parabolic_unit_ball_measure(2) * std::pow(r, 4)).epsilon(0.02));
    CHECK(std::abs(measure / oracle - 1.0) < 0.05);
    CHECK(std::abs(measure / (parabolic_unit_ball_measure(2) * std::pow(r, 4)) - 1.0) < 0.05);
}

TEST_CASE("parabolic indicator measure scales as r^Q")
{
    const GridSpec g = build_grid(2, 64, 64, 1.0, 0.25);
    // Centred between lattice points, so the count is a midpoint rule in
    // every direction rather than a rule with a node on the t = 0 cusp.
    auto measure = [&](double r) {
        const ParabolicIndicatorPreset ball{{0.5 * g.dt(), 0.5 * g.dx(), 0.5 * g.dx()}, r};
        return sample_preset<double>(ball, g).samples().sum() * g.cell_volume();
    };
    const double ratio = measure(0.25) / measure(0.125);
    CHECK(std::abs(ratio / 16.0 - 1.0) < 0.05);
}

TEST_CASE("indicator radius beyond half-period is rejected")
{
    const GridSpec g = build_grid(2, 16, 16, 1.0, 0.25);
    CHECK_THROWS_AS(sample_preset<double>(ParabolicIndicatorPreset{{0, 0, 0}, 0.6}, g), ValidationError);
}

TEST_CASE("presets are deterministic")
{
    const GridSpec g = build_grid(2, 16, 16, 1.0, 1.0);
    const auto a = sample_preset<double>(RandomBandlimitedPreset{7, 3, 1.0}, g, Rank::vector);
    const auto b = sample_preset<double>(RandomBandlimitedPreset{7, 3, 1.0}, g, Rank::vector);
    CHECK((a.samples().array() == b.samples().array()).all());
    const auto c = sample_preset<double>(RandomBandlimitedPreset{8, 3, 1.0}, g, Rank::vector);
    CHECK(relative_l2(a, c) > 0.1);
    const double rms = std::sqrt(a.samples().col(0).squaredNorm() / static_cast<double>(g.points()));
    CHECK(rms == doctest::Approx(1.0).epsilon(1e-12));
    const auto ga = sample_preset<double>(GaussianPreset{{0, 0, 0}, {0.1, 0.1, 0.1}}, g);
    const auto gb = sample_preset<double>(GaussianPreset{{0, 0, 0}, {0.1, 0.1, 0.1}}, g);
    CHECK((ga.samples().array() == gb.samples().array()).all());
}

TEST_CASE("causal_extend zeroes the negative half and is idempotent")
{
    const GridSpec g = build_grid(2, 8, 8, 1.0, 1.0);
    const auto one = sample_preset<double>(ConstantPreset{1.0}, g);
    const auto c = causal_extend(one);
    CHECK(c.support() == Support::causal);
    const Index ns = g.spatial_points();
    for (Index n = 0; n < g.nt; ++n) {
        const double want = n < g.time_origin() ? 0.0 : 1.0;
        CHECK((c.samples().middleRows(n * ns, ns).array() == want).all());
    }
    const auto cc = causal_extend(c);
    CHECK((cc.samples().array() == c.samples().array()).all());
    CHECK(vanishes_before_origin(c));
    const auto again = causal_extend(causal_extend(sample_preset<double>(RandomBandlimitedPreset{1, 2}, g)));
    CHECK((causal_extend(again).samples().array() == again.samples().array()).all());
}

TEST_CASE("snapshot roundtrip is bit exact")
{
    const GridSpec g = build_grid(2, 16, 8, 1.5, 0.5);
    const std::string path = "pk_test_roundtrip.pkf";
    const auto f = sample_preset<double>(RandomBandlimitedPreset{7, 3, 2.0}, g, Rank::vector);
    write_field(f, path, 7);
    const auto h = read_header(path);
    CHECK(h.grid == g);
    CHECK(h.seed == 7);
    const auto r = read_field<double>(path);
    CHECK((r.samples().array() == f.samples().array()).all());

    const auto z = sample_preset<Complex>(RandomBandlimitedPreset{3, 2}, g, Rank::tensor);
    write_field(z, path);
    const auto rz = read_field<Complex>(path);
    CHECK((rz.samples().array() == z.samples().array()).all());
    CHECK_THROWS_AS(read_field<double>(path), ValidationError);
    std::remove(path.c_str());
}

TEST_CASE("snapshot reader reports corrupted files")
{
    const GridSpec g = build_grid(1, 8, 8, 1.0, 1.0);
    const std::string path = "pk_test_corrupt.pkf";
    const auto f = sample_preset<double>(RandomBandlimitedPreset{1, 2}, g);
    write_field(f, path);
    std::vector<char> bytes;
    {
        std::ifstream in(path, std::ios::binary);
        bytes.assign(std::istreambuf_iterator<char>(in), {});
    }
    auto dump = [&](const std::vector<char>& b) {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        out.write(b.data(), static_cast<std::streamsize>(b.size()));
    };

    auto bad_magic = bytes;
    bad_magic[0] = 'X';
    dump(bad_magic);
    CHECK_THROWS_WITH_AS(read_field<double>(path), doctest::Contains("bad header"), ValidationError);

    auto wrong_nx = bytes;
    wrong_nx[12] = 16;  // Nx field, low byte
    dump(wrong_nx);
    CHECK_THROWS_WITH_AS(read_field<double>(path), doctest::Contains("shape"), ValidationError);

    auto cut = bytes;
    cut.resize(cut.size() - 3);
    dump(cut);
    CHECK_THROWS_WITH_AS(read_field<double>(path), doctest::Contains("truncated payload"), ValidationError);
    std::remove(path.c_str());
}

TEST_CASE("cyclic shift and dilation are lattice permutations")
{
    const GridSpec g = build_grid(2, 16, 16, 1.0, 1.0);
    const auto f = sample_preset<double>(RandomBandlimitedPreset{5, 3}, g);
    const auto s = cyclic_shift(cyclic_shift(f, {3, -2, 5}), {-3, 2, -5});
    CHECK((s.samples().array() == f.samples().array()).all());
    const auto d = parabolic_dilate(f, 2);
    CHECK(d.at(g.time_origin(), flatten_spatial({8, 8}, g)) == f.at(g.time_origin(), flatten_spatial({8, 8}, g)));
    CHECK(d.at(g.time_origin() + 1, flatten_spatial({9, 8}, g)) == f.at(g.time_origin() + 4, flatten_spatial({10, 8}, g)));
}
