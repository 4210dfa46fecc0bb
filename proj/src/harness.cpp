#include "parakrylov/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include <json.hpp>

#include "parakrylov/presets.hpp"

namespace pk {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double to_double(const std::string& key, const std::string& v)
{
    try {
        std::size_t used = 0;
        const double x = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ValidationError("config: '" + key + "' expects a number, got '" + v + "'");
    }
}

long long to_int(const std::string& key, const std::string& v)
{
    try {
        std::size_t used = 0;
        const long long x = std::stoll(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ValidationError("config: '" + key + "' expects an integer, got '" + v + "'");
    }
}

bool to_bool(const std::string& key, const std::string& v)
{
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ValidationError("config: '" + key + "' expects a boolean, got '" + v + "'");
}

std::vector<double> to_doubles(const std::string& key, const std::string& v)
{
    std::vector<double> out;
    for (const auto& item : split_list(v)) out.push_back(to_double(key, item));
    return out;
}

std::mt19937_64 stream(std::uint64_t seed, int sample, int component)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), static_cast<std::uint32_t>(sample),
                      static_cast<std::uint32_t>(component)};
    return std::mt19937_64(seq);
}

double uniform(std::mt19937_64& rng, double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }

std::vector<double> random_centre(std::mt19937_64& rng, const GridSpec& g, bool causal)
{
    std::vector<double> c(static_cast<std::size_t>(g.d) + 1);
    c[0] = causal ? uniform(rng, 0.0, 0.25 * g.T) : uniform(rng, -0.25 * g.T, 0.25 * g.T);
    for (int a = 1; a <= g.d; ++a) c[static_cast<std::size_t>(a)] = uniform(rng, -0.25 * g.L, 0.25 * g.L);
    return c;
}

Field gaussian_bumps(std::mt19937_64& rng, const GridSpec& g, bool causal, double amplitude, int bumps)
{
    Field out(g, Rank::scalar);
    for (int b = 0; b < bumps; ++b) {
        std::vector<double> widths(static_cast<std::size_t>(g.d) + 1);
        widths[0] = uniform(rng, g.T / 16, g.T / 8);
        for (int a = 1; a <= g.d; ++a) widths[static_cast<std::size_t>(a)] = uniform(rng, g.L / 16, g.L / 8);
        const auto centre = random_centre(rng, g, causal);
        const double amp = amplitude * uniform(rng, 0.5, 1.0);
        out = out + sample_preset<double>(GaussianPreset{centre, widths, amp}, g);
    }
    return out;
}

Field indicator(std::mt19937_64& rng, const GridSpec& g, bool causal, double amplitude)
{
    const double rmax = std::min(g.L / 5, std::sqrt(0.5 * g.T));
    const double r = uniform(rng, 0.6 * rmax, rmax);
    return sample_preset<double>(ParabolicIndicatorPreset{random_centre(rng, g, causal), r, amplitude}, g);
}

Field critical_profile(std::mt19937_64& rng, const GridSpec& g, bool causal, double amplitude, double beta, double eps)
{
    auto centre = random_centre(rng, g, causal);
    centre[0] *= 0.5;
    const double eps2 = eps * eps;
    const double taper = g.L / 4;
    Field out(g, Rank::scalar);
    std::vector<Index> idx;
    for (Index n = 0; n < g.nt; ++n) {
        const double st = std::sqrt(std::abs(periodic_gap(g.time_at(n), centre[0], g.T)));
        for (Index s = 0; s < g.spatial_points(); ++s) {
            unflatten_spatial(s, g, idx);
            double sq = 0.0;
            for (int a = 0; a < g.d; ++a) {
                const double gap = periodic_gap(g.coord_at(idx[static_cast<std::size_t>(a)]), centre[static_cast<std::size_t>(a) + 1], g.L);
                sq += gap * gap;
            }
            const double rho = st + std::sqrt(sq);
            out.mutable_samples()(n * g.spatial_points() + s, 0) =
                amplitude * std::pow(rho * rho + eps2, -0.5 * beta) * std::exp(-std::pow(rho / taper, 2));
        }
    }
    return out;
}

Field draw(const CorpusSpec& spec, const GridSpec& g, int i, int component)
{
    auto rng = stream(spec.seed, i, component);
    const double amp = uniform(rng, spec.amplitude_min, spec.amplitude_max);
    switch (spec.family) {
    case CorpusFamily::bandlimited: {
        RandomBandlimitedPreset p{sample_seed(spec, i), spec.max_mode, amp};
        const Field all = sample_preset<double>(p, g, spec.rank);
        return component_field(all, component);
    }
    case CorpusFamily::gaussian: return gaussian_bumps(rng, g, spec.causal, amp, 1 + i % 3);
    case CorpusFamily::indicator: return indicator(rng, g, spec.causal, amp);
    case CorpusFamily::mixture: {
        Field f = gaussian_bumps(rng, g, spec.causal, amp, 1 + i % 2);
        f = f + 0.5 * indicator(rng, g, spec.causal, amp);
        const Field bg = sample_preset<double>(RandomBandlimitedPreset{sample_seed(spec, i), std::min(spec.max_mode, 2), 0.2 * amp}, g,
                                               spec.rank);
        return f + component_field(bg, component);
    }
    case CorpusFamily::critical:
        return critical_profile(rng, g, spec.causal, amp, spec.critical_beta, spec.critical_eps > 0.0 ? spec.critical_eps : g.L / 32);
    }
    return Field(g, Rank::scalar);
}

Field centred(const Field& f)
{
    Field out = f;
    for (int c = 0; c < f.components(); ++c) out.mutable_samples().col(c).array() -= f.samples().col(c).mean();
    return out;
}

double kn(const Field& f, const ExponentTriple& e, const RunConfig& cfg, const SupSamplingPlan& plan)
{
    return krylov_norm(f, e, cfg.norm_kind, plan).value;
}

double besov(const Field& f, double delta, const std::vector<double>& thetas) { return besov_heat_norm(f, delta, thetas).value; }

MultiplierSymbol campaign_sigma(const RunConfig& cfg)
{
    if (cfg.sigma == "riesz_j") return named_symbol("riesz_j", {.j = 0});
    if (cfg.sigma == "sigma0_const") return named_symbol("sigma0_const");
    throw ValidationError("config: campaign.sigma must be sigma0_const or riesz_j");
}

std::vector<double> aniso_a(const RunConfig& cfg, int n)
{
    if (!cfg.aniso.a.empty()) return cfg.aniso.a;
    std::vector<double> a(static_cast<std::size_t>(n), 1.0);
    a[0] = 2.0;
    return a;
}

std::vector<double> aniso_p(const RunConfig& cfg, int n)
{
    if (!cfg.aniso.p.empty()) return cfg.aniso.p;
    std::vector<double> p(static_cast<std::size_t>(n), 4.0);
    p[0] = 3.0;
    return p;
}

nlohmann::json run_json(const InequalityRun& r)
{
    nlohmann::json samples = nlohmann::json::array();
    for (const auto& s : r.samples) {
        nlohmann::json rec{{"sample", s.index}, {"lhs", s.lhs}, {"rhs", s.rhs}};
        rec["ratio"] = std::isfinite(s.ratio) ? nlohmann::json(s.ratio) : nlohmann::json("inf");
        samples.push_back(rec);
    }
    return {{"grid", {{"d", r.grid.d}, {"nx", r.grid.nx}, {"nt", r.grid.nt}, {"L", r.grid.L}, {"T", r.grid.T}}},
            {"samples", samples},
            {"degenerate", r.degenerate},
            {"max_ratio", std::isfinite(r.constant) ? nlohmann::json(r.constant) : nlohmann::json("inf")},
            {"min_ratio", r.min_ratio}};
}

void csv_rows(std::ostringstream& os, const std::string& kind, const InequalityRun& r)
{
    os.precision(17);
    for (const auto& s : r.samples) os << kind << ',' << s.index << ',' << s.lhs << ',' << s.rhs << ',' << s.ratio << '\n';
}

}  // namespace

std::string to_string(CorpusFamily f)
{
    switch (f) {
    case CorpusFamily::bandlimited: return "bandlimited";
    case CorpusFamily::gaussian: return "gaussian";
    case CorpusFamily::indicator: return "indicator";
    case CorpusFamily::mixture: return "mixture";
    case CorpusFamily::critical: return "critical";
    }
    return "?";
}

CorpusFamily parse_corpus_family(const std::string& s)
{
    for (auto f : {CorpusFamily::bandlimited, CorpusFamily::gaussian, CorpusFamily::indicator, CorpusFamily::mixture,
                   CorpusFamily::critical})
        if (to_string(f) == s) return f;
    throw ValidationError("unknown corpus family '" + s + "'");
}

std::uint64_t sample_seed(const CorpusSpec& spec, int i)
{
    auto rng = stream(spec.seed, i, -1);
    return rng();
}

std::vector<Field> gen_corpus(const CorpusSpec& spec, const GridSpec& g)
{
    validate(g);
    if (spec.count < 0) throw ValidationError("corpus: count must be >= 0");
    if (!(spec.amplitude_min <= spec.amplitude_max)) throw ValidationError("corpus: amplitude range is empty");
    if (spec.family == CorpusFamily::bandlimited || spec.family == CorpusFamily::mixture) {
        if (spec.max_mode < 1 || spec.max_mode >= g.nx / 2 || spec.max_mode >= g.nt / 2)
            throw ValidationError("corpus: max_mode beyond Nyquist");
    }
    if (spec.family == CorpusFamily::gaussian || spec.family == CorpusFamily::mixture) {
        if (g.L / 16 < g.dx() || g.T / 16 < g.dt()) throw ValidationError("corpus: gaussian widths beyond Nyquist (need Nx, Nt >= 16)");
    }
    if (spec.family == CorpusFamily::critical) {
        const double eps = spec.critical_eps > 0.0 ? spec.critical_eps : g.L / 32;
        if (eps < g.dx()) throw ValidationError("corpus: critical regularization below the grid spacing");
        if (!(spec.critical_beta > 0.0)) throw ValidationError("corpus: critical_beta must be positive");
    }
    std::vector<Field> out;
    out.reserve(static_cast<std::size_t>(spec.count));
    const int comps = component_count(spec.rank, g.d);
    for (int i = 0; i < spec.count; ++i) {
        std::vector<Field> parts;
        for (int c = 0; c < comps; ++c) {
            Field f = draw(spec, g, i, c);
            if (spec.offset != 0.0) f.mutable_samples().array() += spec.offset;
            parts.push_back(std::move(f));
        }
        Field f = comps == 1 ? parts.front() : stack(parts, spec.rank);
        if (spec.causal) f = causal_extend(f);
        else f.set_support(Support::full);
        out.push_back(std::move(f));
    }
    return out;
}

std::string to_string(CheckKind k)
{
    switch (k) {
    case CheckKind::hedberg: return "hedberg";
    case CheckKind::maximal_E: return "maximal_E";
    case CheckKind::aniso_mixed: return "aniso_mixed";
    case CheckKind::heat_thm3: return "heat_thm3";
    case CheckKind::heat_thm4: return "heat_thm4";
    case CheckKind::sobolev: return "sobolev";
    case CheckKind::gagliardo: return "gagliardo";
    case CheckKind::besov_equiv: return "besov_equiv";
    case CheckKind::besov_lift: return "besov_lift";
    case CheckKind::embed_besov: return "embed_besov";
    }
    return "?";
}

const std::vector<CheckKind>& all_check_kinds()
{
    static const std::vector<CheckKind> kinds{CheckKind::hedberg,   CheckKind::maximal_E, CheckKind::aniso_mixed, CheckKind::heat_thm3,
                                              CheckKind::heat_thm4, CheckKind::sobolev,   CheckKind::gagliardo,   CheckKind::besov_equiv,
                                              CheckKind::besov_lift, CheckKind::embed_besov};
    return kinds;
}

CheckKind parse_check_kind(const std::string& s)
{
    for (auto k : all_check_kinds())
        if (to_string(k) == s) return k;
    throw ValidationError("unknown check kind '" + s + "'");
}

Rank corpus_rank(CheckKind k) { return k == CheckKind::heat_thm4 ? Rank::vector : Rank::scalar; }

bool needs_causal(CheckKind k) { return k == CheckKind::heat_thm3 || k == CheckKind::heat_thm4 || k == CheckKind::besov_lift; }

SupSamplingPlan RunConfig::plan(const GridSpec& g) const
{
    // rho_min is in physical units; the default 2 dx follows the grid.
    return SupSamplingPlan::dyadic(g, rho_min, stride);
}

SolverOptions RunConfig::solver_options() const
{
    SolverOptions o;
    o.exponents = exponents;
    o.kind = norm_kind;
    o.tol = tol;
    o.max_iter = max_iter;
    o.stride = stride;
    if (rho_min > 0.0) o.radii = plan(grid).radii;
    return o;
}

RunConfig parse_config(const std::string& text)
{
    RunConfig c;
    int d = c.grid.d, nx = c.grid.nx, nt = c.grid.nt;
    double L = c.grid.L, T = c.grid.T;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ValidationError("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string v = trim(line.substr(eq + 1));
        if (key == "grid.d") d = static_cast<int>(to_int(key, v));
        else if (key == "grid.nx") nx = static_cast<int>(to_int(key, v));
        else if (key == "grid.nt") nt = static_cast<int>(to_int(key, v));
        else if (key == "grid.L") L = to_double(key, v);
        else if (key == "grid.T") T = to_double(key, v);
        else if (key == "exponents.p") c.exponents.p = to_double(key, v);
        else if (key == "exponents.q") c.exponents.q = to_double(key, v);
        else if (key == "exponents.beta") c.exponents.beta = to_double(key, v);
        else if (key == "exponents.kind") {
            if (v == "E") c.norm_kind = KrylovKind::E;
            else if (v == "F") c.norm_kind = KrylovKind::F;
            else throw ValidationError("config: exponents.kind must be E or F");
        } else if (key == "plan.rho_min") c.rho_min = to_double(key, v);
        else if (key == "plan.stride") c.stride = static_cast<int>(to_int(key, v));
        else if (key == "seed" || key == "corpus.seed") c.corpus.seed = static_cast<std::uint64_t>(to_int(key, v));
        else if (key == "corpus.count") c.corpus.count = static_cast<int>(to_int(key, v));
        else if (key == "corpus.family") c.corpus.family = parse_corpus_family(v);
        else if (key == "corpus.amplitude_min") c.corpus.amplitude_min = to_double(key, v);
        else if (key == "corpus.amplitude_max") c.corpus.amplitude_max = to_double(key, v);
        else if (key == "corpus.causal") c.corpus.causal = to_bool(key, v);
        else if (key == "corpus.max_mode") c.corpus.max_mode = static_cast<int>(to_int(key, v));
        else if (key == "corpus.offset") c.corpus.offset = to_double(key, v);
        else if (key == "corpus.critical_beta") c.corpus.critical_beta = to_double(key, v);
        else if (key == "corpus.critical_eps") c.corpus.critical_eps = to_double(key, v);
        else if (key == "campaign.checks") {
            c.checks.clear();
            for (const auto& item : split_list(v)) c.checks.push_back(parse_check_kind(item));
        } else if (key == "campaign.refine") c.refine = to_bool(key, v);
        else if (key == "campaign.sigma") c.sigma = v;
        else if (key == "hedberg.alpha") c.hedberg.alpha = to_double(key, v);
        else if (key == "hedberg.p") c.hedberg.p = to_double(key, v);
        else if (key == "hedberg.q") c.hedberg.q = to_double(key, v);
        else if (key == "aniso.a") c.aniso.a = to_doubles(key, v);
        else if (key == "aniso.p") c.aniso.p = to_doubles(key, v);
        else if (key == "besov.delta") c.besov.delta = to_double(key, v);
        else if (key == "besov.lift_delta") c.besov.lift_delta = to_double(key, v);
        else if (key == "besov.thetas") c.besov.thetas = static_cast<int>(to_int(key, v));
        else if (key == "solver.tol") c.tol = to_double(key, v);
        else if (key == "solver.max_iter") c.max_iter = static_cast<int>(to_int(key, v));
        else if (key == "data.seed") c.data.seed = static_cast<std::uint64_t>(to_int(key, v));
        else if (key == "data.max_mode") c.data.max_mode = static_cast<int>(to_int(key, v));
        else if (key == "data.f_amplitude") c.data.f_amplitude = to_double(key, v);
        else if (key == "data.F_amplitude") c.data.F_amplitude = to_double(key, v);
        else if (key == "data.f_file") c.data.f_file = v;
        else if (key == "data.F_file") c.data.F_file = v;
        else if (key == "drift.seed") c.drift.seed = static_cast<std::uint64_t>(to_int(key, v));
        else if (key == "drift.max_mode") c.drift.max_mode = static_cast<int>(to_int(key, v));
        else if (key == "drift.b_amplitude") c.drift.b_amplitude = to_double(key, v);
        else if (key == "drift.c_amplitude") c.drift.c_amplitude = to_double(key, v);
        else if (key == "output.dir") c.output_dir = v;
        else throw ValidationError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    c.grid = build_grid(d, nx, nt, L, T);
    return c;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot read config '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

double hedberg_q(const RunConfig& c)
{
    if (c.hedberg.q > 0.0) return c.hedberg.q;
    return 0.5 * (c.hedberg.p + c.grid.Q() / c.hedberg.alpha);
}

void validate_for(CheckKind kind, const RunConfig& c)
{
    const int d = c.grid.d;
    const ExponentTriple& e = c.exponents;
    const std::string what = "check " + to_string(kind);
    switch (kind) {
    case CheckKind::hedberg: {
        const double q = hedberg_q(c);
        const double Q = c.grid.Q();
        if (!(c.hedberg.p > 1.0 && c.hedberg.p <= q)) throw ValidationError(what + ": needs 1 < p <= q");
        if (!(c.hedberg.alpha > 0.0 && c.hedberg.alpha * q < Q)) throw ValidationError(what + ": needs 0 < alpha < Q/q");
        break;
    }
    case CheckKind::maximal_E:
    case CheckKind::embed_besov: require_admissible(e, d, what); break;
    case CheckKind::aniso_mixed: {
        const int n = d + 1;
        const auto a = aniso_a(c, n);
        const auto p = aniso_p(c, n);
        if (static_cast<int>(a.size()) != n || static_cast<int>(p.size()) != n)
            throw ValidationError(what + ": aniso.a and aniso.p need d+1 entries");
        validate(AnisotropyVector{a}, c.grid);
        for (double x : p)
            if (!(x > 1.0)) throw ValidationError(what + ": aniso.p entries must exceed 1");
        break;
    }
    case CheckKind::heat_thm3:
    case CheckKind::sobolev:
        if (!(e.p > 3.0 && e.q > 3.0)) throw ValidationError(what + ": needs p, q > 3");
        require_admissible(e, d, what);
        break;
    case CheckKind::heat_thm4:
        if (!(e.p > 2.0 && e.q > 2.0)) throw ValidationError(what + ": needs p, q > 2");
        require_admissible(e, d, what);
        campaign_sigma(c);
        break;
    case CheckKind::gagliardo:
        if (!(c.besov.delta > 0.0)) throw ValidationError(what + ": needs delta > 0");
        require_admissible(e, d, what);
        break;
    case CheckKind::besov_equiv:
        if (!(c.besov.delta > 0.0)) throw ValidationError(what + ": needs delta > 0");
        break;
    case CheckKind::besov_lift:
        if (!(c.besov.lift_delta > 2.0)) throw ValidationError(what + ": needs lift_delta > 2");
        break;
    }
}

void validate(const RunConfig& c)
{
    validate(c.grid);
    validate(c.plan(c.grid), c.grid);
    for (auto k : c.checks) validate_for(k, c);
    if (!(c.tol > 0.0)) throw ValidationError("config: solver.tol must be positive");
    if (c.max_iter < 1) throw ValidationError("config: solver.max_iter must be >= 1");
}

std::pair<double, double> evaluate_sample(CheckKind kind, const Field& f, const RunConfig& cfg)
{
    const GridSpec& g = f.grid();
    const SupSamplingPlan plan = cfg.plan(g);
    const ExponentTriple& e = cfg.exponents;
    if (f.rank() != corpus_rank(kind)) throw ValidationError("check " + to_string(kind) + ": corpus has the wrong rank");
    if (needs_causal(kind) && !vanishes_before_origin(f))
        throw ValidationError("check " + to_string(kind) + ": corpus must vanish before t = 0");
    switch (kind) {
    case CheckKind::hedberg: {
        const double alpha = cfg.hedberg.alpha;
        const double q = hedberg_q(cfg);
        const double s = alpha * q / g.Q();
        const Field a = abs(f);
        const double morrey = morrey_norm(a, cfg.hedberg.p, q, plan).value;
        if (morrey == 0.0) return {0.0, 0.0};
        const Field M = parabolic_maximal(a, plan);
        const Field I = riesz_potential(a, alpha);
        double best = -1.0, lhs = 0.0, rhs = 0.0;
        for (Index i = 0; i < a.points(); ++i) {
            const double den = std::pow(M.samples()(i, 0), 1.0 - s) * std::pow(morrey, s);
            const double num = I.samples()(i, 0);
            const double r = den > 0.0 ? num / den : (num > 0.0 ? inf : 0.0);
            if (r > best) {
                best = r;
                lhs = num;
                rhs = den;
            }
        }
        return {lhs, rhs};
    }
    case CheckKind::maximal_E: return {kn(parabolic_maximal(f, plan), e, cfg, plan), kn(f, e, cfg, plan)};
    case CheckKind::aniso_mixed: {
        const int n = g.d + 1;
        const auto M = anisotropic_maximal(f, AnisotropyVector{aniso_a(cfg, n)}, plan.radii);
        const auto p = aniso_p(cfg, n);
        return {axis_mixed_norm(magnitude(M), g, p), axis_mixed_norm(magnitude(f), g, p)};
    }
    case CheckKind::heat_thm3: {
        const Field u = duhamel(f);
        return {heat_solution_norm(u, e, cfg.norm_kind, plan).total(), kn(f, e.derived(3), cfg, plan)};
    }
    case CheckKind::heat_thm4: {
        const Field u = duhamel_div(f, campaign_sigma(cfg));
        const double lhs = kn(u, e, cfg, plan) + kn(gradient(u), e.derived(2), cfg, plan);
        return {lhs, kn(f, e.derived(2), cfg, plan)};
    }
    case CheckKind::sobolev: {
        const Field u = centred(f);
        const double rhs = kn(partial_time(u), e.derived(3), cfg, plan) + kn(laplacian(u), e.derived(3), cfg, plan);
        return {heat_solution_norm(u, e, cfg.norm_kind, plan).total(), rhs};
    }
    case CheckKind::gagliardo: {
        const double delta = cfg.besov.delta;
        const double s = (2.0 + delta) / (1.0 + delta);
        const Field u = centred(f);
        const auto thetas = default_theta_plan(g, cfg.besov.thetas);
        const double lhs = kn(gradient(u), {s * e.p, s * e.q, e.beta / s}, cfg, plan);
        const double b = besov(u, delta, thetas);
        const double strong = kn(partial_time(u), e, cfg, plan) + kn(laplacian(u), e, cfg, plan);
        return {lhs, std::pow(b, 1.0 / (2.0 + delta)) * std::pow(strong, (1.0 + delta) / (2.0 + delta))};
    }
    case CheckKind::besov_equiv: {
        const double delta = cfg.besov.delta;
        const Field u = centred(f);
        const auto thetas = default_theta_plan(g, cfg.besov.thetas);
        return {besov(u, delta, thetas), besov(partial_time(u), delta + 2.0, thetas) + besov(laplacian(u), delta + 2.0, thetas)};
    }
    case CheckKind::besov_lift: {
        const double delta = cfg.besov.lift_delta;
        const auto thetas = default_theta_plan(g, cfg.besov.thetas);
        return {besov(duhamel(f), delta - 2.0, thetas), besov(f, delta, thetas)};
    }
    case CheckKind::embed_besov: {
        const auto thetas = default_theta_plan(g, cfg.besov.thetas);
        return {besov(f, e.beta, thetas), kn(f, e, cfg, plan)};
    }
    }
    return {0.0, 0.0};
}

InequalityRun run_inequality(CheckKind kind, const std::vector<Field>& corpus, const RunConfig& cfg)
{
    if (corpus.empty()) throw ValidationError("check " + to_string(kind) + ": empty corpus");
    validate_for(kind, cfg);
    InequalityRun run;
    run.grid = corpus.front().grid();
    run.min_ratio = inf;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const auto [lhs, rhs] = evaluate_sample(kind, corpus[i], cfg);
        if (lhs == 0.0 && rhs == 0.0) {
            ++run.degenerate;
            continue;
        }
        const double ratio = rhs > 0.0 ? lhs / rhs : inf;
        run.samples.push_back({static_cast<int>(i), lhs, rhs, ratio});
        run.constant = std::max(run.constant, ratio);
        run.min_ratio = std::min(run.min_ratio, ratio);
    }
    if (run.samples.empty()) run.min_ratio = 0.0;
    return run;
}

InequalityReport verify_inequality(CheckKind kind, const std::vector<Field>& corpus, const RunConfig& cfg)
{
    InequalityReport r;
    r.kind = kind;
    r.coarse = run_inequality(kind, corpus, cfg);
    if (r.coarse.degenerate > 0) r.notes.push_back(std::to_string(r.coarse.degenerate) + " degenerate sample(s) skipped (0/0)");
    if (cfg.refine) {
        CorpusSpec spec = cfg.corpus;
        spec.count = static_cast<int>(corpus.size());
        spec.rank = corpus_rank(kind);
        spec.causal = spec.causal || needs_causal(kind);
        r.fine = run_inequality(kind, gen_corpus(spec, r.coarse.grid.refined(2)), cfg);
        if (r.coarse.constant > 0.0 && std::isfinite(r.coarse.constant)) r.stability = r.fine->constant / r.coarse.constant;
    }
    if (r.coarse.samples.empty())
        r.verdict = "degenerate";
    else if (!std::isfinite(r.coarse.constant))
        r.verdict = "unbounded";
    else if (!r.stability)
        r.verdict = cfg.refine ? "unbounded" : "unrefined";
    else
        r.verdict = (std::isfinite(*r.stability) && *r.stability <= 2.0) ? "bounded" : "unbounded";
    return r;
}

InequalityReport run_campaign(CheckKind kind, const RunConfig& cfg)
{
    validate_for(kind, cfg);
    CorpusSpec spec = cfg.corpus;
    spec.rank = corpus_rank(kind);
    spec.causal = spec.causal || needs_causal(kind);
    RunConfig local = cfg;
    local.corpus = spec;
    return verify_inequality(kind, gen_corpus(spec, cfg.grid), local);
}

std::string to_json(const InequalityReport& r)
{
    nlohmann::json j{{"kind", to_string(r.kind)}, {"coarse", run_json(r.coarse)}, {"verdict", r.verdict}, {"notes", r.notes}};
    j["empirical_constant"] = std::isfinite(r.coarse.constant) ? nlohmann::json(r.coarse.constant) : nlohmann::json("inf");
    if (r.fine) {
        j["fine"] = run_json(*r.fine);
        j["fine_constant"] = std::isfinite(r.fine->constant) ? nlohmann::json(r.fine->constant) : nlohmann::json("inf");
    }
    j["stability_factor"] = r.stability ? nlohmann::json(*r.stability) : nlohmann::json(nullptr);
    return j.dump();
}

std::string to_csv(const InequalityReport& r, bool header)
{
    std::ostringstream os;
    if (header) os << "kind,sample,lhs,rhs,ratio\n";
    csv_rows(os, to_string(r.kind), r.coarse);
    if (r.fine) csv_rows(os, to_string(r.kind) + ":fine", *r.fine);
    return os.str();
}

}  // namespace pk
