#include "parakrylov/normbank.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "lattice_ops.hpp"
#include "spectral_detail.hpp"

namespace pk {

using detail::Convolver;

ExponentTriple ExponentTriple::riesz_mapped(double alpha) const
{
    if (!(beta > alpha)) throw ValidationError("riesz_mapped: beta must exceed alpha");
    const double s = beta / (beta - alpha);
    return {p * s, q * s, beta - alpha};
}

bool admissible(const ExponentTriple& e, int d)
{
    return e.p > 1.0 && e.q > 1.0 && std::isfinite(e.p) && std::isfinite(e.q) && e.beta > 0.0 && e.beta < 2.0 / e.p + d / e.q;
}

std::string to_string(const ExponentTriple& e)
{
    std::ostringstream os;
    os << "(p=" << e.p << ", q=" << e.q << ", beta=" << e.beta << ")";
    return os.str();
}

void require_admissible(const ExponentTriple& e, int d, const std::string& what)
{
    if (!admissible(e, d))
        throw ValidationError(what + ": inadmissible exponents " + to_string(e) + " for d=" + std::to_string(d) +
                              " (need p, q > 1 and 0 < beta < 2/p + d/q)");
}

std::vector<Index> cylinder_members(const GridSpec& g, const CylinderSpec& c)
{
    if (static_cast<int>(c.x.size()) != g.d) throw ValidationError("cylinder: centre needs d spatial indices");
    const Index ns = g.spatial_points();
    std::vector<Index> out;
    std::vector<Index> idx(static_cast<std::size_t>(g.d));
    if (c.kind == CylinderKind::cylinder) {
        const auto w = detail::time_window(g, c.radius);
        const auto offsets = detail::spatial_ball_offsets(g, c.radius);
        for (Index m = -w.half; m <= w.half; ++m) {
            if (w.full && m == w.half) break;
            const Index n = wrap_index(c.n + m, g.nt);
            for (const auto& off : offsets) {
                for (int a = 0; a < g.d; ++a) idx[static_cast<std::size_t>(a)] = c.x[static_cast<std::size_t>(a)] + off[static_cast<std::size_t>(a)];
                out.push_back(n * ns + flatten_spatial(idx, g));
            }
        }
    } else {
        const Eigen::ArrayXd k = detail::parabolic_ball_kernel(g, c.radius);
        std::vector<Index> off;
        for (Index i = 0; i < k.size(); ++i) {
            if (k[i] == 0.0) continue;
            const Index m = i / ns;
            unflatten_spatial(i % ns, g, off);
            for (int a = 0; a < g.d; ++a) idx[static_cast<std::size_t>(a)] = c.x[static_cast<std::size_t>(a)] + off[static_cast<std::size_t>(a)];
            out.push_back(wrap_index(c.n + m, g.nt) * ns + flatten_spatial(idx, g));
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

SupSamplingPlan SupSamplingPlan::dyadic(const GridSpec& g, double rho_min, int stride)
{
    SupSamplingPlan plan;
    if (rho_min <= 0.0) rho_min = 2.0 * g.dx();
    const double rho_max = 0.25 * g.L * (1.0 + 1e-12);
    for (double r = rho_min; r <= rho_max; r *= 2.0) plan.radii.push_back(r);
    plan.stride = stride > 0 ? stride : std::max(1, g.nx / 16);
    plan.time_stride = std::max(1, static_cast<int>(static_cast<long long>(plan.stride) * g.nt / g.nx));
    return plan;
}

void validate(const SupSamplingPlan& plan, const GridSpec& g)
{
    if (plan.radii.empty()) throw ValidationError("plan: no radii");
    for (double r : plan.radii)
        if (!(r > 0.0) || r > 0.25 * g.L * (1.0 + 1e-12)) throw ValidationError("plan: radii must lie in (0, L/4]");
    if (plan.stride < 1 || plan.time_stride < 1) throw ValidationError("plan: stride must be >= 1");
}

std::string to_json(const NormReport& r)
{
    nlohmann::json j;
    j["norm_kind"] = r.norm_kind;
    j["exponents"] = r.exponents;
    j["value"] = r.value;
    if (r.argmax) {
        nlohmann::json c;
        c["n"] = r.argmax->n;
        c["x"] = r.argmax->x;
        j["argmax_center"] = c;
        j["argmax_radius"] = r.argmax->radius;
    } else {
        j["argmax_center"] = nullptr;
        j["argmax_radius"] = nullptr;
    }
    if (r.argmax_theta) j["argmax_theta"] = *r.argmax_theta;
    if (r.plan) {
        j["plan"] = {{"radii", r.plan->radii}, {"stride", r.plan->stride}, {"time_stride", r.plan->time_stride}};
    } else {
        j["plan"] = nullptr;
    }
    return j.dump();
}

namespace {

std::vector<double> region_mask(const GridSpec& g, const std::optional<CylinderSpec>& region)
{
    std::vector<double> mask;
    if (!region) return mask;
    mask.assign(static_cast<std::size_t>(g.points()), 0.0);
    const auto members = cylinder_members(g, *region);
    if (members.empty()) throw ValidationError("mixed_norm: empty region");
    for (Index i : members) mask[static_cast<std::size_t>(i)] = 1.0;
    return mask;
}

// The norm itself is well defined on the closed endpoint beta = 2/p + d/q,
// where the weight is 1 and the sup is over plain local mixed norms.
void require_norm_exponents(const ExponentTriple& e, int d, const std::string& what)
{
    const double top = 2.0 / e.p + d / e.q;
    if (admissible(e, d) || (e.p > 1.0 && e.q > 1.0 && std::abs(e.beta - top) <= 1e-12 * top)) return;
    require_admissible(e, d, what);
}

double weight_exponent(const ExponentTriple& e, int d) { return e.beta - 2.0 / e.p - d / e.q; }

}  // namespace

template <class Scalar>
double mixed_norm(const BasicField<Scalar>& f, double p, double q, AxisOrder order, const std::optional<CylinderSpec>& region)
{
    if (!(p >= 1.0) || !(q >= 1.0)) throw ValidationError("mixed_norm: exponents must be >= 1");
    const GridSpec& g = f.grid();
    const Eigen::ArrayXd mag = magnitude(f);
    const auto mask = region_mask(g, region);
    const Index ns = g.spatial_points();
    auto value = [&](Index i) { return mask.empty() ? mag[i] : mag[i] * mask[static_cast<std::size_t>(i)]; };
    const double vx = std::pow(g.dx(), g.d);
    double outer = 0.0;
    if (order == AxisOrder::time_outer) {
        for (Index n = 0; n < g.nt; ++n) {
            double inner = 0.0;
            for (Index s = 0; s < ns; ++s) inner += std::pow(value(n * ns + s), q);
            outer += std::pow(inner * vx, p / q);
        }
        return std::pow(outer * g.dt(), 1.0 / p);
    }
    for (Index s = 0; s < ns; ++s) {
        double inner = 0.0;
        for (Index n = 0; n < g.nt; ++n) inner += std::pow(value(n * ns + s), p);
        outer += std::pow(inner * g.dt(), q / p);
    }
    return std::pow(outer * vx, 1.0 / q);
}

template <class Scalar>
double lp_norm(const BasicField<Scalar>& f, double p)
{
    if (!(p >= 1.0)) throw ValidationError("lp_norm: p must be >= 1");
    const Eigen::ArrayXd mag = magnitude(f);
    double sum = 0.0;
    for (Index i = 0; i < mag.size(); ++i) sum += std::pow(mag[i], p);
    return std::pow(sum * f.grid().cell_volume(), 1.0 / p);
}

double axis_mixed_norm(const Eigen::ArrayXd& values, const GridSpec& g, const std::vector<double>& exps)
{
    if (static_cast<int>(exps.size()) != g.d + 1) throw ValidationError("axis_mixed_norm: need d+1 exponents");
    for (double e : exps)
        if (!(e >= 1.0)) throw ValidationError("axis_mixed_norm: exponents must be >= 1");
    if (values.size() != g.points()) throw ValidationError("axis_mixed_norm: size mismatch");
    auto dims = g.dims();
    Eigen::ArrayXd cur = values.abs().pow(exps.back());
    for (int axis = g.d; axis >= 0; --axis) {
        const double h = axis == 0 ? g.dt() : g.dx();
        const Index n = dims[static_cast<std::size_t>(axis)];
        const Index outer = cur.size() / n;
        Eigen::ArrayXd next(outer);
        for (Index o = 0; o < outer; ++o) {
            double acc = 0.0;
            for (Index m = 0; m < n; ++m) acc += cur[o * n + m];
            next[o] = acc * h;
        }
        if (axis > 0)
            cur = next.pow(exps[static_cast<std::size_t>(axis) - 1] / exps[static_cast<std::size_t>(axis)]);
        else
            cur = next.pow(1.0 / exps[0]);
    }
    return cur[0];
}

template <class Scalar>
double local_krylov(const BasicField<Scalar>& f, const ExponentTriple& e, KrylovKind kind, const CylinderSpec& c)
{
    const GridSpec& g = f.grid();
    const Eigen::ArrayXd mag = magnitude(f);
    const Index ns = g.spatial_points();
    const auto w = detail::time_window(g, c.radius);
    const auto offsets = detail::spatial_ball_offsets(g, c.radius);
    std::vector<Index> times;
    for (Index m = -w.half; m <= w.half; ++m) {
        if (w.full && m == w.half) break;
        times.push_back(wrap_index(c.n + m, g.nt));
    }
    std::vector<Index> spots;
    std::vector<Index> idx(static_cast<std::size_t>(g.d));
    for (const auto& off : offsets) {
        for (int a = 0; a < g.d; ++a) idx[static_cast<std::size_t>(a)] = c.x[static_cast<std::size_t>(a)] + off[static_cast<std::size_t>(a)];
        spots.push_back(flatten_spatial(idx, g));
    }
    const double vx = std::pow(g.dx(), g.d);
    double outer = 0.0;
    double root = 0.0;
    if (kind == KrylovKind::E) {
        for (Index n : times) {
            double inner = 0.0;
            for (Index s : spots) inner += std::pow(mag[n * ns + s], e.q);
            outer += std::pow(inner * vx, e.p / e.q);
        }
        root = std::pow(outer * g.dt(), 1.0 / e.p);
    } else {
        for (Index s : spots) {
            double inner = 0.0;
            for (Index n : times) inner += std::pow(mag[n * ns + s], e.p);
            outer += std::pow(inner * g.dt(), e.q / e.p);
        }
        root = std::pow(outer * vx, 1.0 / e.q);
    }
    return root * std::pow(c.radius, weight_exponent(e, g.d));
}

template <class Scalar>
NormReport krylov_norm(const BasicField<Scalar>& f, const ExponentTriple& e, KrylovKind kind, const SupSamplingPlan& plan)
{
    const GridSpec& g = f.grid();
    require_norm_exponents(e, g.d, "krylov_norm");
    validate(plan, g);
    const Eigen::ArrayXd mag = magnitude(f);
    const auto centers = detail::plan_centers(g, plan);
    const auto dims = g.dims();
    const auto sdims = g.spatial_dims();
    const double vx = std::pow(g.dx(), g.d);

    double best = -1.0;
    double best_radius = plan.radii.front();
    Index best_center = centers.front();
    for (double rho : plan.radii) {
        const Convolver ball(sdims, detail::spatial_ball_kernel(g, rho));
        const auto w = detail::time_window(g, rho);
        Eigen::ArrayXd local;
        if (kind == KrylovKind::E) {
            Eigen::ArrayXd inner = (ball.apply(mag.pow(e.q)) * vx).max(0.0);
            local = detail::axis_window_sum(inner.pow(e.p / e.q), dims, 0, w) * g.dt();
            local = local.max(0.0).pow(1.0 / e.p);
        } else {
            Eigen::ArrayXd inner = detail::axis_window_sum(mag.pow(e.p), dims, 0, w) * g.dt();
            local = (ball.apply(inner.pow(e.q / e.p)) * vx).max(0.0).pow(1.0 / e.q);
        }
        const double scale = std::pow(rho, weight_exponent(e, g.d));
        for (Index c : centers) {
            const double v = local[c] * scale;
            if (v > best) {
                best = v;
                best_radius = rho;
                best_center = c;
            }
        }
    }
    NormReport r;
    r.norm_kind = kind == KrylovKind::E ? "krylov_E" : "krylov_F";
    r.exponents = {e.p, e.q, e.beta};
    r.argmax = detail::centre_of(g, best_center, best_radius, CylinderKind::cylinder);
    r.value = local_krylov(f, e, kind, *r.argmax);
    r.plan = plan;
    return r;
}

template <class Scalar>
NormReport krylov_norm(const BasicField<Scalar>& f, const ExponentTriple& e, KrylovKind kind)
{
    return krylov_norm(f, e, kind, SupSamplingPlan::dyadic(f.grid()));
}

template <class Scalar>
double local_morrey(const BasicField<Scalar>& f, double p, double r, const CylinderSpec& ball)
{
    const GridSpec& g = f.grid();
    const Eigen::ArrayXd mag = magnitude(f);
    CylinderSpec b = ball;
    b.kind = CylinderKind::ball;
    const auto members = cylinder_members(g, b);
    double sum = 0.0;
    for (Index i : members) sum += std::pow(mag[i], p);
    const double mu = static_cast<double>(members.size()) * g.cell_volume();
    return std::pow(mu, 1.0 / r - 1.0 / p) * std::pow(sum * g.cell_volume(), 1.0 / p);
}

template <class Scalar>
NormReport morrey_norm(const BasicField<Scalar>& f, double p, double r, const SupSamplingPlan& plan)
{
    if (!(p > 1.0)) throw ValidationError("morrey_norm: p must exceed 1");
    if (p > r) throw ValidationError("morrey_norm: need p <= r");
    const GridSpec& g = f.grid();
    validate(plan, g);
    const Eigen::ArrayXd powered = magnitude(f).pow(p);
    const auto centers = detail::plan_centers(g, plan);
    double best = -1.0;
    double best_radius = plan.radii.front();
    Index best_center = centers.front();
    for (double rho : plan.radii) {
        const Eigen::ArrayXd kernel = detail::parabolic_ball_kernel(g, rho);
        const double mu = kernel.sum() * g.cell_volume();
        const Convolver conv(g.dims(), kernel);
        const Eigen::ArrayXd sums = (conv.apply(powered) * g.cell_volume()).max(0.0);
        const double scale = std::pow(mu, 1.0 / r - 1.0 / p);
        for (Index c : centers) {
            const double v = scale * std::pow(sums[c], 1.0 / p);
            if (v > best) {
                best = v;
                best_radius = rho;
                best_center = c;
            }
        }
    }
    NormReport rep;
    rep.norm_kind = "morrey";
    rep.exponents = {p, r};
    rep.argmax = detail::centre_of(g, best_center, best_radius, CylinderKind::ball);
    rep.value = local_morrey(f, p, r, *rep.argmax);
    rep.plan = plan;
    return rep;
}

template <class Scalar>
NormReport morrey_norm(const BasicField<Scalar>& f, double p, double r)
{
    return morrey_norm(f, p, r, SupSamplingPlan::dyadic(f.grid()));
}

std::vector<double> default_theta_plan(const GridSpec& g, int count)
{
    std::vector<double> out;
    const double lo = g.dt();
    const double hi = g.T;
    for (int i = 0; i < count; ++i) out.push_back(lo * std::pow(hi / lo, count == 1 ? 0.0 : static_cast<double>(i) / (count - 1)));
    return out;
}

namespace {

// Sup norm of the field filtered by a real lattice symbol, every component.
template <class Scalar>
class FilteredSup {
public:
    explicit FilteredSup(const BasicField<Scalar>& f) : grid_(f.grid()), table_(f.grid())
    {
        for (int c = 0; c < f.components(); ++c)
            spectra_.push_back(detail::spectrum_of(grid_, f.samples().col(c).template cast<Complex>()));
    }

    template <class Symbol>
    double operator()(Symbol&& symbol) const
    {
        const Index ns = grid_.spatial_points();
        Eigen::ArrayXd mag2 = Eigen::ArrayXd::Zero(grid_.points());
        Eigen::VectorXcd buf;
        for (const auto& spec : spectra_) {
            buf = spec;
            for (Index n = 0; n < grid_.nt; ++n) {
                const double tau = table_.tau[static_cast<std::size_t>(n)];
                for (Index s = 0; s < ns; ++s) buf[n * ns + s] *= symbol(tau, table_.xi_norm[static_cast<std::size_t>(s)]);
            }
            detail::invert_in_place(grid_, buf);
            if constexpr (is_complex_v<Scalar>)
                mag2 += buf.array().abs2();
            else
                mag2 += buf.real().array().square();
        }
        return std::sqrt(mag2.maxCoeff());
    }

private:
    GridSpec grid_;
    FrequencyTable table_;
    std::vector<Eigen::VectorXcd> spectra_;
};

}  // namespace

template <class Scalar>
NormReport besov_heat_norm(const BasicField<Scalar>& f, double delta, const std::vector<double>& thetas)
{
    if (!(delta > 0.0)) throw ValidationError("besov_heat_norm: delta must be > 0");
    if (thetas.empty()) throw ValidationError("besov_heat_norm: empty theta plan");
    const FilteredSup<Scalar> sup(f);
    NormReport r;
    r.norm_kind = "besov_heat";
    r.exponents = {delta};
    r.value = -1.0;
    for (double theta : thetas) {
        if (!(theta > 0.0)) throw ValidationError("besov_heat_norm: theta values must be positive");
        const double th2 = theta * theta;
        const double v = std::pow(theta, 0.5 * delta) * sup([th2](double tau, double xn) {
            return std::exp(-th2 * (tau * tau + xn * xn * xn * xn));
        });
        if (v > r.value) {
            r.value = v;
            r.argmax_theta = theta;
        }
    }
    return r;
}

template <class Scalar>
NormReport besov_heat_norm(const BasicField<Scalar>& f, double delta)
{
    return besov_heat_norm(f, delta, default_theta_plan(f.grid()));
}

double lp_cutoff(double tau, double xi_norm)
{
    const double gauge = std::sqrt(std::abs(tau)) + xi_norm;
    if (gauge <= 1.0) return 1.0;
    if (gauge >= 2.0) return 0.0;
    const double a = std::exp(-1.0 / (2.0 - gauge));
    const double b = std::exp(-1.0 / (gauge - 1.0));
    return a / (a + b);
}

std::pair<int, int> resolvable_blocks(const GridSpec& g)
{
    const double two_pi = 2.0 * std::numbers::pi;
    const double lowest = std::min(std::sqrt(two_pi / g.T), two_pi / g.L);
    const double highest = std::sqrt(std::numbers::pi / g.dt()) + std::sqrt(static_cast<double>(g.d)) * std::numbers::pi / g.dx();
    return {static_cast<int>(std::ceil(std::log2(lowest))) - 1, static_cast<int>(std::ceil(std::log2(highest)))};
}

template <class Scalar>
double besov_lp_norm(const BasicField<Scalar>& f, double delta)
{
    if (!(delta > 0.0)) throw ValidationError("besov_lp_norm: delta must be > 0");
    const auto [jmin, jmax] = resolvable_blocks(f.grid());
    if (jmin > jmax) throw ValidationError("besov_lp_norm: no resolvable j");
    const FilteredSup<Scalar> sup(f);
    double best = 0.0;
    for (int j = jmin; j <= jmax; ++j) {
        const double s = std::ldexp(1.0, j);
        const double v = std::pow(s, -delta) * sup([s](double tau, double xn) { return lp_cutoff(tau / (s * s), xn / s); });
        best = std::max(best, v);
    }
    return best;
}

template <class Scalar>
DecayProfile decay_profile(const BasicField<Scalar>& f, const std::vector<double>& thetas, double tolerance)
{
    for (std::size_t i = 0; i < thetas.size(); ++i) {
        if (!(thetas[i] > 0.0)) throw ValidationError("decay_profile: theta values must be positive");
        if (i > 0 && !(thetas[i] > thetas[i - 1])) throw ValidationError("decay_profile: theta values must ascend");
    }
    const FilteredSup<Scalar> sup(f);
    DecayProfile out;
    double peak = 0.0;
    for (double theta : thetas) {
        const double th2 = theta * theta;
        const double v = sup([th2](double tau, double xn) { return std::exp(-th2 * (tau * tau + xn * xn * xn * xn)); });
        out.samples.emplace_back(theta, v);
        peak = std::max(peak, v);
    }
    if (out.samples.empty() || peak == 0.0) {
        out.zero_at_infinity = true;
        return out;
    }
    const std::size_t start = out.samples.size() - std::max<std::size_t>(2, out.samples.size() / 3);
    bool monotone = true;
    for (std::size_t i = start + 1; i < out.samples.size(); ++i)
        monotone = monotone && out.samples[i].second <= out.samples[i - 1].second * (1.0 + 1e-12);
    out.zero_at_infinity = monotone && out.samples.back().second <= tolerance * peak;
    return out;
}

double decay_exponent(const DecayProfile& profile, double lo, double hi)
{
    double sx = 0, sy = 0, sxx = 0, sxy = 0, n = 0;
    for (const auto& [theta, v] : profile.samples) {
        if (theta < lo || theta > hi || !(v > 0.0)) continue;
        const double x = std::log(theta);
        const double y = std::log(v);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        n += 1.0;
    }
    if (n < 2.0) throw ValidationError("decay_exponent: fewer than two samples in range");
    return -(n * sxy - sx * sy) / (n * sxx - sx * sx);
}

#define PK_NORM_INSTANTIATE(S)                                                                                      \
    template double mixed_norm(const BasicField<S>&, double, double, AxisOrder, const std::optional<CylinderSpec>&); \
    template double lp_norm(const BasicField<S>&, double);                                                          \
    template double local_krylov(const BasicField<S>&, const ExponentTriple&, KrylovKind, const CylinderSpec&);      \
    template NormReport krylov_norm(const BasicField<S>&, const ExponentTriple&, KrylovKind, const SupSamplingPlan&); \
    template NormReport krylov_norm(const BasicField<S>&, const ExponentTriple&, KrylovKind);                       \
    template double local_morrey(const BasicField<S>&, double, double, const CylinderSpec&);                        \
    template NormReport morrey_norm(const BasicField<S>&, double, double, const SupSamplingPlan&);                  \
    template NormReport morrey_norm(const BasicField<S>&, double, double);                                          \
    template NormReport besov_heat_norm(const BasicField<S>&, double, const std::vector<double>&);                  \
    template NormReport besov_heat_norm(const BasicField<S>&, double);                                              \
    template double besov_lp_norm(const BasicField<S>&, double);                                                    \
    template DecayProfile decay_profile(const BasicField<S>&, const std::vector<double>&, double);

PK_NORM_INSTANTIATE(double)
PK_NORM_INSTANTIATE(Complex)

#undef PK_NORM_INSTANTIATE

}  // namespace pk
