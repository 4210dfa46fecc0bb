#include "parakrylov/evolve.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "spectral_detail.hpp"

namespace pk {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

bool is_empty(const Field& f) { return f.points() == 0; }

// Exponential-integrator weights for one decay rate lambda = |xi|^2.
struct StepWeights {
    double decay;  // e^{-lambda dt}
    double phi1;   // int_0^dt e^{-lambda s} ds
    double phi2;   // weight of (g_{n+1} - g_n) in the trapezoid variant
};

StepWeights step_weights(double lambda, double dt)
{
    const double z = lambda * dt;
    if (z == 0.0) return {1.0, dt, 0.5 * dt};
    const double one_minus = -std::expm1(-z);
    const double phi1 = dt * one_minus / z;
    double w;
    if (z < 1e-3)
        w = 0.5 - z / 3.0 + z * z / 8.0 - z * z * z / 30.0;
    else
        w = (one_minus - z * std::exp(-z)) / (z * z);
    return {std::exp(-z), phi1, phi1 - dt * w};
}

std::vector<StepWeights> weight_table(const GridSpec& g)
{
    const FrequencyTable table(g);
    std::vector<StepWeights> w;
    w.reserve(table.xi_norm.size());
    for (double r : table.xi_norm) w.push_back(step_weights(r * r, g.dt()));
    return w;
}

void march(const GridSpec& g, const std::vector<StepWeights>& w, const Eigen::VectorXcd& gh, Eigen::VectorXcd& uh,
           bool trapezoid)
{
    const Index ns = g.spatial_points();
    uh.setZero(g.points());
    for (Index n = 0; n + 1 < g.nt; ++n) {
        const Complex* gn = gh.data() + n * ns;
        const Complex* un = uh.data() + n * ns;
        Complex* next = uh.data() + (n + 1) * ns;
        for (Index s = 0; s < ns; ++s) {
            const StepWeights& ws = w[static_cast<std::size_t>(s)];
            next[s] = ws.decay * un[s] + ws.phi1 * gn[s];
            if (trapezoid) next[s] += ws.phi2 * (gn[s + ns] - gn[s]);
        }
    }
}

SupSamplingPlan plan_for(const GridSpec& g, const SolverOptions& o)
{
    SupSamplingPlan plan = SupSamplingPlan::dyadic(g, 0.0, o.stride);
    if (!o.radii.empty()) plan.radii = o.radii;
    validate(plan, g);
    return plan;
}

double krylov(const Field& f, const ExponentTriple& e, KrylovKind kind, const SupSamplingPlan& plan)
{
    return krylov_norm(f, e, kind, plan).value;
}

// Pointwise b . v for two vector fields.
Field dot(const Field& b, const Field& v)
{
    Field out(b.grid(), Rank::scalar);
    out.mutable_samples().col(0) = (b.samples().array() * v.samples().array()).rowwise().sum().matrix();
    return out;
}

// Dealiased u (x) u, entry (i, j) at column i d + j.
Field dealiased_product(const Field& u)
{
    const Field ud = dealias(u);
    const int d = u.grid().d;
    Field prod(u.grid(), Rank::tensor, u.support());
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            prod.mutable_samples().col(i * d + j) = ud.samples().col(i).cwiseProduct(ud.samples().col(j));
    return dealias(prod);
}

// L2 norm over every slice but the last.
double head_norm(const Field& f)
{
    const Index rows = (f.grid().nt - 1) * f.grid().spatial_points();
    return f.samples().topRows(rows).norm();
}

bool diverging(const std::vector<double>& inc)
{
    const double last = inc.back();
    if (!std::isfinite(last)) return true;
    if (inc.size() > 1 && last > 10.0 * inc.front()) return true;
    if (inc.size() < 4) return false;
    const std::size_t k = inc.size() - 1;
    return inc[k] > inc[k - 1] && inc[k - 1] > inc[k - 2] && inc[k - 2] > inc[k - 3];
}

void record(SolverReport& r, double increment)
{
    r.increments.push_back(increment);
    const std::size_t k = r.increments.size();
    if (k > 1) r.ratios.push_back(r.increments[k - 2] > 0.0 ? increment / r.increments[k - 2] : nan);
    r.iterations = static_cast<int>(k);
}

nlohmann::json number(double v)
{
    if (std::isfinite(v)) return v;
    return nullptr;
}

}  // namespace

std::string to_string(DuhamelScheme s)
{
    switch (s) {
    case DuhamelScheme::exponential_euler: return "exponential_euler";
    case DuhamelScheme::exponential_trapezoid: return "exponential_trapezoid";
    case DuhamelScheme::fourier_division: return "fourier_division";
    }
    return "?";
}

DuhamelScheme parse_duhamel_scheme(const std::string& s)
{
    if (s == "exponential_euler" || s == "euler") return DuhamelScheme::exponential_euler;
    if (s == "exponential_trapezoid" || s == "trapezoid") return DuhamelScheme::exponential_trapezoid;
    if (s == "fourier_division" || s == "fourier") return DuhamelScheme::fourier_division;
    throw ValidationError("unknown duhamel scheme '" + s + "'");
}

template <class Scalar>
BasicField<Scalar> duhamel(const BasicField<Scalar>& g, DuhamelScheme scheme)
{
    const GridSpec& grid = g.grid();
    BasicField<Scalar> out(grid, g.rank(), g.support());
    if (scheme == DuhamelScheme::fourier_division) {
        const FrequencyTable table(grid);
        const Index ns = grid.spatial_points();
        for (int c = 0; c < g.components(); ++c) {
            Eigen::VectorXcd buf = detail::spectrum_of(grid, g.samples().col(c).template cast<Complex>());
            for (Index n = 0; n < grid.nt; ++n)
                for (Index s = 0; s < ns; ++s) {
                    const double r = table.xi_norm[static_cast<std::size_t>(s)];
                    const Complex denom(r * r, table.tau[static_cast<std::size_t>(n)]);
                    buf[n * ns + s] = (n == 0 && s == 0) ? Complex(0.0) : buf[n * ns + s] / denom;
                }
            detail::invert_in_place(grid, buf);
            detail::store(out, c, buf);
        }
        return out;
    }
    const auto w = weight_table(grid);
    const bool trapezoid = scheme == DuhamelScheme::exponential_trapezoid;
    Eigen::VectorXcd uh;
    for (int c = 0; c < g.components(); ++c) {
        Eigen::VectorXcd gh = g.samples().col(c).template cast<Complex>();
        detail::spatial_forward(grid, gh);
        march(grid, w, gh, uh, trapezoid);
        detail::spatial_backward(grid, uh);
        detail::store(out, c, uh);
    }
    return out;
}

template <class Scalar>
BasicField<Scalar> duhamel_div(const BasicField<Scalar>& F, const MultiplierSymbol& sigma, DuhamelScheme scheme)
{
    if (F.rank() == Rank::scalar) throw ValidationError("duhamel_div: rank mismatch (F must be a vector or a tensor)");
    return duhamel(apply_sigma(divergence(F), sigma), scheme);
}

template <class Scalar>
BasicField<Scalar> duhamel_div_leray(const BasicField<Scalar>& F, DuhamelScheme scheme)
{
    if (F.rank() != Rank::tensor) throw ValidationError("duhamel_div_leray: rank mismatch (F must be a tensor)");
    return duhamel(leray_project(divergence(F)), scheme);
}

template <class Scalar>
BasicField<Scalar> singular_T(const BasicField<Scalar>& h, const MultiplierSymbol& sigma, int i, int j)
{
    const int d = h.grid().d;
    if (i < 0 || i >= d || j < 0 || j >= d) throw ValidationError("singular_T: index out of range");
    if (sigma.kind != MultiplierSymbol::Kind::homogeneous0)
        throw ValidationError("singular_T: symbol must be homogeneous of degree 0");
    const auto symbol = spacetime_symbol(
        [sigma, i, j](double tau, std::span<const double> xi) {
            double r2 = 0.0;
            for (double x : xi) r2 += x * x;
            if (r2 == 0.0) return Complex(0.0);
            return -xi[static_cast<std::size_t>(i)] * xi[static_cast<std::size_t>(j)] * sigma(tau, xi, std::sqrt(r2)) /
                   Complex(r2, tau);
        },
        0.0, "singular_T");
    return apply_multiplier(h, symbol);
}

template <class Scalar>
BasicField<Scalar> discrete_heat_operator(const BasicField<Scalar>& u)
{
    const GridSpec& g = u.grid();
    const Index ns = g.spatial_points();
    const auto w = weight_table(g);
    BasicField<Scalar> out(g, u.rank());
    for (int c = 0; c < u.components(); ++c) {
        Eigen::VectorXcd uh = u.samples().col(c).template cast<Complex>();
        detail::spatial_forward(g, uh);
        Eigen::VectorXcd gh = Eigen::VectorXcd::Zero(g.points());
        for (Index n = 0; n + 1 < g.nt; ++n)
            for (Index s = 0; s < ns; ++s) {
                const StepWeights& ws = w[static_cast<std::size_t>(s)];
                gh[n * ns + s] = (uh[(n + 1) * ns + s] - ws.decay * uh[n * ns + s]) / ws.phi1;
            }
        detail::spatial_backward(g, gh);
        detail::store(out, c, gh);
    }
    return out;
}

SolutionNorm solution_norm(const Field& u, const ExponentTriple& e, KrylovKind kind, const SupSamplingPlan& plan)
{
    const ExponentTriple base{e.p, e.q, 1.0};
    SolutionNorm n;
    n.kind = kind;
    n.value_u = krylov(u, base, kind, plan);
    n.value_Du = krylov(gradient(u), base.derived(2), kind, plan);
    return n;
}

HeatSolutionNorm heat_solution_norm(const Field& u, const ExponentTriple& e, KrylovKind kind, const SupSamplingPlan& plan)
{
    if (u.rank() != Rank::scalar) throw ValidationError("heat_solution_norm: scalar field expected");
    HeatSolutionNorm n;
    n.kind = kind;
    const Field du = gradient(u);
    n.value_u = krylov(u, e, kind, plan);
    n.value_Du = krylov(du, e.derived(2), kind, plan);
    n.value_D2u = krylov(gradient(du), e.derived(3), kind, plan);
    return n;
}

DriftData make_drift_data(Field b, Field c, const ExponentTriple& e, KrylovKind kind, const SupSamplingPlan& plan)
{
    if (b.rank() != Rank::vector) throw ValidationError("drift: b must be a vector field");
    if (c.rank() != Rank::scalar) throw ValidationError("drift: c must be a scalar field");
    if (!(b.grid() == c.grid())) throw ValidationError("drift: grid mismatch");
    DriftData data;
    data.b_norm = krylov(b, {e.p, e.q, 1.0}, kind, plan);
    data.c_norm = krylov(c, {e.p / 2, e.q / 2, 2.0}, kind, plan);
    data.smallness = data.b_norm + data.c_norm;
    data.b = std::move(b);
    data.c = std::move(c);
    return data;
}

std::string to_string(SolverVerdict v)
{
    switch (v) {
    case SolverVerdict::converged: return "converged";
    case SolverVerdict::diverged: return "diverged";
    case SolverVerdict::max_iter: return "max_iter";
    }
    return "?";
}

std::string to_json_lines(const SolverReport& r)
{
    std::ostringstream os;
    for (std::size_t k = 0; k < r.increments.size(); ++k) {
        nlohmann::json rec{{"solver", r.solver}, {"iteration", k + 1}, {"increment", number(r.increments[k])}};
        rec["ratio"] = k > 0 ? number(r.ratios[k - 1]) : nlohmann::json(nullptr);
        os << rec.dump() << '\n';
    }
    nlohmann::json s{{"solver", r.solver},
                     {"summary", true},
                     {"verdict", to_string(r.verdict)},
                     {"iterations", r.iterations},
                     {"first_iterate_norm", number(r.first_iterate_norm)},
                     {"final_norm", number(r.final_norm)},
                     {"residual_mild", number(r.residual_mild)},
                     {"residual_strong", number(r.residual_strong)},
                     {"C1", number(r.C1)},
                     {"C2", number(r.C2)},
                     {"C3", number(r.C3)},
                     {"margin", number(r.margin)},
                     {"warnings", r.warnings}};
    nlohmann::json ratios = nlohmann::json::array();
    for (double v : r.ratios) ratios.push_back(number(v));
    s["ratios"] = ratios;
    os << s.dump() << '\n';
    return os.str();
}

std::pair<Field, SolverReport> drift_heat(const Field& f, const DriftData& drift, const SolverOptions& o)
{
    const GridSpec& g = f.grid();
    if (f.rank() != Rank::scalar) throw ValidationError("drift_heat: scalar forcing expected");
    if (!(drift.b.grid() == g)) throw ValidationError("drift_heat: drift grid differs from forcing grid");
    if (!vanishes_before_origin(f)) throw ValidationError("drift_heat: forcing must vanish before t = 0");
    const SupSamplingPlan plan = plan_for(g, o);
    const ExponentTriple& e = o.exponents;
    require_admissible(e, g.d, "drift_heat");
    auto X = [&](const Field& v) { return heat_solution_norm(v, e, o.kind, plan).total(); };
    auto perturb = [&](const Field& v) { return dot(drift.b, gradient(v)) + Field(g, Rank::scalar, drift.c.samples().cwiseProduct(v.samples())); };

    SolverReport r;
    r.solver = "drift_heat";
    const Field base = duhamel(f);
    Field u = base;
    r.first_iterate_norm = X(base);
    record(r, r.first_iterate_norm);
    const bool trivial = (drift.b.samples().array() == 0.0).all() && (drift.c.samples().array() == 0.0).all();
    if (trivial || r.first_iterate_norm == 0.0) {
        r.verdict = SolverVerdict::converged;
    } else {
        while (r.iterations < o.max_iter) {
            const Field next = base + duhamel(perturb(u));
            record(r, X(next - u));
            u = next;
            if (r.increments.back() <= o.tol * r.first_iterate_norm) {
                r.verdict = SolverVerdict::converged;
                break;
            }
            if (diverging(r.increments)) {
                r.verdict = SolverVerdict::diverged;
                break;
            }
        }
    }
    r.margin = r.ratios.empty() ? 1.0 : 1.0 - r.ratios.front();
    r.final_norm = X(u);
    if (r.verdict == SolverVerdict::diverged) {
        r.residual_mild = r.residual_strong = r.C1 = r.C2 = r.C3 = nan;
        return {u, r};
    }
    const Field rhs = base + duhamel(perturb(u));
    const double x_u = r.final_norm;
    r.residual_mild = x_u > 0.0 ? X(u - rhs) / x_u : X(u - rhs);
    const Field strong = discrete_heat_operator(u) - perturb(u) - f;
    const double fn = head_norm(f);
    r.residual_strong = fn > 0.0 ? head_norm(strong) / fn : head_norm(strong);

    const double f_norm = krylov(f, e.derived(3), o.kind, plan);
    r.C1 = f_norm > 0.0 ? r.first_iterate_norm / f_norm : nan;
    const double du_norm = krylov(gradient(u), e.derived(2), o.kind, plan);
    const double u_norm = krylov(u, e, o.kind, plan);
    const Field bu = dot(drift.b, gradient(u));
    const Field cu(g, Rank::scalar, drift.c.samples().cwiseProduct(u.samples()));
    r.C2 = drift.b_norm * du_norm > 0.0 ? X(duhamel(bu)) / (drift.b_norm * du_norm) : nan;
    r.C3 = drift.c_norm * u_norm > 0.0 ? X(duhamel(cu)) / (drift.c_norm * u_norm) : nan;
    return {u, r};
}

Field nse_bilinear(const Field& u)
{
    if (u.rank() != Rank::vector) throw ValidationError("nse_bilinear: vector field expected");
    return duhamel_div_leray(dealiased_product(u));
}

std::pair<Field, SolverReport> nse_picard(const Field& f_in, const Field& F_in, const SolverOptions& o)
{
    const bool has_f = !is_empty(f_in);
    const bool has_F = !is_empty(F_in);
    if (!has_f && !has_F) throw ValidationError("nse_picard: no data grid");
    const GridSpec g = has_f ? f_in.grid() : F_in.grid();
    if (g.d != 2 && g.d != 3) throw ValidationError("nse_picard: d must be 2 or 3");
    if (has_f && f_in.rank() != Rank::vector) throw ValidationError("nse_picard: f must be a vector field");
    if (has_F && F_in.rank() != Rank::tensor) throw ValidationError("nse_picard: F must be a tensor field");
    if (has_f && has_F && !(f_in.grid() == F_in.grid())) throw ValidationError("nse_picard: grid mismatch");
    if ((has_f && !vanishes_before_origin(f_in)) || (has_F && !vanishes_before_origin(F_in)))
        throw ValidationError("nse_picard: non-causal input");
    const Field f = has_f ? f_in : Field(g, Rank::vector, Support::causal);
    const Field F = has_F ? F_in : Field(g, Rank::tensor, Support::causal);
    const ExponentTriple e{o.exponents.p, o.exponents.q, 1.0};
    require_admissible(e, g.d, "nse_picard");
    const bool f_zero = (f.samples().array() == 0.0).all();
    if (!f_zero && (e.p <= 3.0 || e.q <= 3.0)) throw ValidationError("nse_picard: a nonzero force needs p, q > 3");

    SolverReport r;
    r.solver = "nse_picard";
    const SupSamplingPlan plan = plan_for(g, o);
    auto X = [&](const Field& v) { return solution_norm(v, e, o.kind, plan).total(); };

    const Field fp = leray_project(f);
    if (relative_l2(fp, f) > 1e-12) r.warnings.push_back("force was not divergence-free; its Leray projection is used");
    const Field Tf = duhamel(fp);
    const Field TF = duhamel_div_leray(F);
    const Field lin = Tf + TF;

    Field u = lin;
    r.first_iterate_norm = X(lin);
    record(r, r.first_iterate_norm);
    if (r.first_iterate_norm <= o.tol * r.first_iterate_norm) {
        r.verdict = SolverVerdict::converged;
    } else {
        while (r.iterations < o.max_iter) {
            const Field next = lin - nse_bilinear(u);
            record(r, X(next - u));
            u = next;
            if (r.increments.back() <= o.tol * r.first_iterate_norm) {
                r.verdict = SolverVerdict::converged;
                break;
            }
            if (diverging(r.increments)) {
                r.verdict = SolverVerdict::diverged;
                break;
            }
        }
    }
    r.margin = r.ratios.empty() ? 1.0 : 1.0 - r.ratios.front();
    r.final_norm = X(u);
    if (r.verdict == SolverVerdict::diverged) {
        r.residual_mild = r.residual_strong = r.C1 = r.C2 = r.C3 = nan;
        return {u, r};
    }
    const Field quad = nse_bilinear(u);
    const double x_u = r.final_norm;
    const double mild = X(u - (lin - quad));
    r.residual_mild = x_u > 0.0 ? mild / x_u : mild;
    r.residual_strong = relative_momentum_residual(u, recover_pressure(u, F, f), F, f);

    if (!f_zero) {
        const double fn = krylov(f, {e.p / 3, e.q / 3, 3.0}, o.kind, plan);
        r.C1 = fn > 0.0 ? X(Tf) / fn : nan;
    } else {
        r.C1 = nan;
    }
    const double Fn = krylov(F, e.derived(2), o.kind, plan);
    r.C2 = Fn > 0.0 ? X(TF) / Fn : nan;
    const double un = krylov(u, e, o.kind, plan);
    r.C3 = un > 0.0 ? X(quad) / (un * un) : nan;
    return {u, r};
}

Field recover_pressure(const Field& u, const Field& F, const Field& f)
{
    if (u.rank() != Rank::vector) throw ValidationError("recover_pressure: u must be a vector field");
    Field S = dealiased_product(u);
    if (!is_empty(F)) S = S - F;
    Field q = divergence(divergence(S));
    if (!is_empty(f)) q = q - divergence(f);
    const auto inverse_laplacian = spatial_symbol(
        [](std::span<const double> xi) {
            double r2 = 0.0;
            for (double x : xi) r2 += x * x;
            return Complex(1.0 / r2);
        },
        0.0, "inverse_minus_laplacian");
    Field p = apply_multiplier(q, inverse_laplacian);
    p.set_support(u.support());
    return p;
}

Field momentum_residual(const Field& u, const Field& p, const Field& F, const Field& f)
{
    Field r = discrete_heat_operator(u) + divergence(dealiased_product(u)) + gradient(p);
    if (!is_empty(f)) r = r - f;
    if (!is_empty(F)) r = r - divergence(F);
    const Index ns = u.grid().spatial_points();
    r.mutable_samples().bottomRows(ns).setZero();
    return r;
}

double relative_momentum_residual(const Field& u, const Field& p, const Field& F, const Field& f)
{
    const Field r = momentum_residual(u, p, F, f);
    Field forcing(u.grid(), Rank::vector);
    if (!is_empty(f)) forcing = forcing + f;
    if (!is_empty(F)) forcing = forcing + divergence(F);
    const double den = head_norm(forcing);
    return den > 0.0 ? head_norm(r) / den : head_norm(r);
}

#define PK_EVOLVE_INSTANTIATE(S)                                                                        \
    template BasicField<S> duhamel(const BasicField<S>&, DuhamelScheme);                                \
    template BasicField<S> duhamel_div(const BasicField<S>&, const MultiplierSymbol&, DuhamelScheme);   \
    template BasicField<S> duhamel_div_leray(const BasicField<S>&, DuhamelScheme);                      \
    template BasicField<S> singular_T(const BasicField<S>&, const MultiplierSymbol&, int, int);         \
    template BasicField<S> discrete_heat_operator(const BasicField<S>&);

PK_EVOLVE_INSTANTIATE(double)
PK_EVOLVE_INSTANTIATE(Complex)

#undef PK_EVOLVE_INSTANTIATE

}  // namespace pk
