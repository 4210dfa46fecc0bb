#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "parakrylov/evolve.hpp"
#include "parakrylov/field_io.hpp"
#include "parakrylov/harness.hpp"
#include "parakrylov/presets.hpp"

using namespace pk;
namespace fs = std::filesystem;

namespace {

constexpr int exit_validation = 2;
constexpr int exit_diverged = 3;

// Causal band-limited datum of the given rank; an amplitude of 0 gives zero.
Field datum(const GridSpec& g, Rank rank, std::uint64_t seed, int max_mode, double amplitude, const std::string& file)
{
    if (!file.empty()) {
        Field f = read_field<double>(file);
        if (!(f.grid() == g) || f.rank() != rank) throw ValidationError("datum '" + file + "' does not match the configured grid/rank");
        return f;
    }
    if (amplitude == 0.0) return Field(g, rank, Support::causal);
    return causal_extend(sample_preset<double>(RandomBandlimitedPreset{seed, max_mode, amplitude}, g, rank));
}

fs::path out_dir(const RunConfig& c)
{
    fs::path dir(c.output_dir);
    fs::create_directories(dir);
    return dir;
}

void write_text(const fs::path& path, const std::string& text)
{
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << text;
}

std::string last_line(const std::string& lines)
{
    const auto end = lines.find_last_not_of('\n');
    const auto begin = lines.rfind('\n', end);
    return lines.substr(begin == std::string::npos ? 0 : begin + 1, end - (begin == std::string::npos ? 0 : begin + 1) + 1);
}

int cmd_norm(const std::string& kind, double p, double q, double beta, double r, double delta, double rho_min, int stride,
             const std::string& in)
{
    const Field f = read_field<double>(in);
    const SupSamplingPlan plan = SupSamplingPlan::dyadic(f.grid(), rho_min, stride);
    NormReport rep;
    if (kind == "E" || kind == "F") {
        rep = krylov_norm(f, ExponentTriple{p, q, beta}, kind == "E" ? KrylovKind::E : KrylovKind::F, plan);
    } else if (kind == "morrey") {
        rep = morrey_norm(f, p, r, plan);
    } else if (kind == "besov_heat") {
        rep = besov_heat_norm(f, delta);
    } else if (kind == "besov_lp") {
        rep = NormReport{"besov_lp", {delta}, besov_lp_norm(f, delta), {}, {}, {}};
    } else if (kind == "lp") {
        rep = NormReport{"lp", {p}, lp_norm(f, p), {}, {}, {}};
    } else {
        throw ValidationError("norm: unknown kind '" + kind + "'");
    }
    std::cout << to_json(rep) << '\n';
    return 0;
}

int finish_solve(const RunConfig& c, const std::string& name, const Field& u, const SolverReport& r)
{
    const fs::path dir = out_dir(c);
    write_field(u, (dir / ("u_" + name + ".pkf")).string(), c.data.seed);
    const std::string lines = to_json_lines(r);
    write_text(dir / ("report_" + name + ".jsonl"), lines);
    std::cout << last_line(lines) << '\n';
    return r.verdict == SolverVerdict::diverged ? exit_diverged : 0;
}

int cmd_solve(const std::string& which, const RunConfig& c)
{
    validate(c);
    const GridSpec& g = c.grid;
    const SolverOptions o = c.solver_options();
    if (which == "heat") {
        const Field f = datum(g, Rank::scalar, c.data.seed, c.data.max_mode, c.data.f_amplitude, c.data.f_file);
        const SupSamplingPlan plan = c.plan(g);
        const Field u = duhamel(f);
        const HeatSolutionNorm X = heat_solution_norm(u, c.exponents, c.norm_kind, plan);
        const double rhs = krylov_norm(f, c.exponents.derived(3), c.norm_kind, plan).value;
        const fs::path dir = out_dir(c);
        write_field(u, (dir / "u_heat.pkf").string(), c.data.seed);
        nlohmann::json rec{{"solver", "heat"},
                           {"summary", true},
                           {"verdict", "converged"},
                           {"iterations", 1},
                           {"norm_u", X.value_u},
                           {"norm_Du", X.value_Du},
                           {"norm_D2u", X.value_D2u},
                           {"norm_f", rhs}};
        rec["C1"] = rhs > 0.0 ? nlohmann::json(X.total() / rhs) : nlohmann::json(nullptr);
        write_text(dir / "report_heat.jsonl", rec.dump() + "\n");
        std::cout << rec.dump() << '\n';
        return 0;
    }
    if (which == "drift") {
        const Field f = datum(g, Rank::scalar, c.data.seed, c.data.max_mode, c.data.f_amplitude, c.data.f_file);
        Field b = datum(g, Rank::vector, c.drift.seed, c.drift.max_mode, c.drift.b_amplitude, "");
        Field cc = datum(g, Rank::scalar, c.drift.seed + 1, c.drift.max_mode, c.drift.c_amplitude, "");
        b.set_support(Support::full);
        cc.set_support(Support::full);
        const DriftData dd = make_drift_data(b, cc, o.exponents, o.kind, c.plan(g));
        const auto [u, r] = drift_heat(f, dd, o);
        return finish_solve(c, "drift", u, r);
    }
    if (which == "nse") {
        const Field f = datum(g, Rank::vector, c.data.seed, c.data.max_mode, c.data.f_amplitude, c.data.f_file);
        const Field F = datum(g, Rank::tensor, c.data.seed + 1, c.data.max_mode, c.data.F_amplitude, c.data.F_file);
        const auto [u, r] = nse_picard(f, F, o);
        const fs::path dir = out_dir(c);
        write_field(recover_pressure(u, F, f), (dir / "p_nse.pkf").string(), c.data.seed);
        return finish_solve(c, "nse", u, r);
    }
    throw ValidationError("solve: unknown solver '" + which + "' (heat, drift, nse)");
}

int cmd_verify(const std::string& kind_name, const RunConfig& c)
{
    const CheckKind kind = parse_check_kind(kind_name);
    validate(c);
    const InequalityReport r = run_campaign(kind, c);
    const fs::path dir = out_dir(c);
    const std::string json = to_json(r);
    write_text(dir / ("report_" + kind_name + ".json"), json + "\n");
    write_text(dir / ("summary_" + kind_name + ".csv"), to_csv(r));
    std::cout << json << '\n';
    return 0;
}

int cmd_corpus(const RunConfig& c)
{
    validate(c);
    const auto corpus = gen_corpus(c.corpus, c.grid);
    const fs::path dir = out_dir(c);
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "corpus_%03zu.pkf", i);
        write_field(corpus[i], (dir / name).string(), sample_seed(c.corpus, static_cast<int>(i)));
    }
    std::cout << nlohmann::json{{"count", corpus.size()}, {"dir", dir.string()}}.dump() << '\n';
    return 0;
}

int run_cli(int argc, char** argv)
{
    CLI::App app{"pk: parabolic Krylov norms, heat and Navier-Stokes solvers, inequality campaigns"};
    app.require_subcommand(1);

    std::string config_path, norm_kind = "E", in_path, solver, check;
    double p = 4.0, q = 4.0, beta = 1.0, r = 4.0, delta = 1.0, rho_min = 0.0;
    int stride = 0;

    auto* norm = app.add_subcommand("norm", "norm of a snapshot");
    norm->add_option("--kind", norm_kind, "E | F | morrey | besov_heat | besov_lp | lp");
    norm->add_option("--p", p);
    norm->add_option("--q", q);
    norm->add_option("--beta", beta);
    norm->add_option("--r", r, "Morrey scaling exponent");
    norm->add_option("--delta", delta, "Besov smoothness");
    norm->add_option("--rho-min", rho_min);
    norm->add_option("--stride", stride);
    norm->add_option("--in", in_path)->required();

    auto* solve = app.add_subcommand("solve", "run a solver");
    solve->add_option("solver", solver, "heat | drift | nse")->required();
    solve->add_option("--config", config_path)->required();

    auto* verify = app.add_subcommand("verify", "run an inequality campaign");
    verify->add_option("kind", check)->required();
    verify->add_option("--config", config_path)->required();

    auto* corpus = app.add_subcommand("corpus", "write a corpus of snapshots");
    corpus->add_option("--config", config_path)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_validation;
    }

    try {
        if (*norm) return cmd_norm(norm_kind, p, q, beta, r, delta, rho_min, stride, in_path);
        const RunConfig c = load_config(config_path);
        if (*solve) return cmd_solve(solver, c);
        if (*verify) return cmd_verify(check, c);
        return cmd_corpus(c);
    } catch (const ValidationError& e) {
        std::cerr << "pk: " << e.what() << '\n';
        return exit_validation;
    } catch (const std::exception& e) {
        std::cerr << "pk: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace

int main(int argc, char** argv) { return run_cli(argc, argv); }
