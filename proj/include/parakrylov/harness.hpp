#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "parakrylov/evolve.hpp"
#include "parakrylov/normbank.hpp"
#include "parakrylov/potential.hpp"

namespace pk {

enum class CorpusFamily { bandlimited, gaussian, indicator, mixture, critical };

std::string to_string(CorpusFamily f);
CorpusFamily parse_corpus_family(const std::string& s);

/// A reproducible family of test fields. Every sample is drawn from a
/// continuous description (centres, widths, spectra in physical units), so a
/// refined grid samples the same functions.
///
/// bandlimited: random trigonometric polynomial, |omega|, |k_a| <= max_mode.
/// gaussian:    one to three anisotropic Gaussian bumps of parabolic shape.
/// indicator:   indicator of one parabolic ball.
/// mixture:     gaussian bumps plus a small band-limited background and an
///              indicator.
/// critical:    (rho^2 + eps^2)^{-beta/2} around a random centre, tapered by a
///              Gaussian of width L/4; eps = critical_eps (0: L/32) and
///              beta = critical_beta.
struct CorpusSpec {
    std::uint64_t seed = 1;
    int count = 10;
    CorpusFamily family = CorpusFamily::mixture;
    double amplitude_min = 0.5;
    double amplitude_max = 1.5;
    bool causal = false;
    int max_mode = 4;
    double offset = 0.0;  // constant added to every sample (before causal truncation)
    double critical_beta = 1.0;
    double critical_eps = 0.0;
    Rank rank = Rank::scalar;
};

/// Seed of sample i, also written into snapshot headers.
std::uint64_t sample_seed(const CorpusSpec& spec, int i);

std::vector<Field> gen_corpus(const CorpusSpec& spec, const GridSpec& grid);

enum class CheckKind {
    hedberg,
    maximal_E,
    aniso_mixed,
    heat_thm3,
    heat_thm4,
    sobolev,
    gagliardo,
    besov_equiv,
    besov_lift,
    embed_besov
};

std::string to_string(CheckKind k);
CheckKind parse_check_kind(const std::string& s);
const std::vector<CheckKind>& all_check_kinds();

/// Rank the corpus of a campaign must have, and whether it must be causal.
Rank corpus_rank(CheckKind k);
bool needs_causal(CheckKind k);

struct HedbergParams {
    double alpha = 1.0;
    double p = 2.0;
    double q = 0.0;  // 0: midpoint of [p, Q / alpha)
};

struct AnisoParams {
    std::vector<double> a;  // empty: (2, 1, ..., 1)
    std::vector<double> p;  // empty: (3, 4, ..., 4)
};

struct BesovParams {
    double delta = 1.0;       // besov_equiv, gagliardo
    double lift_delta = 3.0;  // besov_lift (> 2)
    int thetas = 32;
};

struct DataParams {
    std::uint64_t seed = 7;
    int max_mode = 3;
    double f_amplitude = 0.0;
    double F_amplitude = 0.0;
    std::string f_file;
    std::string F_file;
};

struct DriftParams {
    std::uint64_t seed = 11;
    int max_mode = 2;
    double b_amplitude = 0.0;
    double c_amplitude = 0.0;
};

/// Everything a CLI run needs. Parsed from flat `key = value` text; see
/// README for the key list.
struct RunConfig {
    GridSpec grid = build_grid(2, 32, 32, 1.0, 0.25);
    ExponentTriple exponents{4.0, 4.0, 0.5};
    KrylovKind norm_kind = KrylovKind::E;
    double rho_min = 0.0;
    int stride = 0;
    CorpusSpec corpus;
    std::vector<CheckKind> checks;
    bool refine = true;
    HedbergParams hedberg;
    AnisoParams aniso;
    BesovParams besov;
    std::string sigma = "sigma0_const";  // heat_thm4 multiplier: sigma0_const | riesz_j
    double tol = 1e-6;
    int max_iter = 30;
    DataParams data;
    DriftParams drift;
    std::string output_dir = "pk_out";

    SupSamplingPlan plan(const GridSpec& g) const;
    SolverOptions solver_options() const;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
/// Throws ValidationError if any requested check has inadmissible exponents.
void validate(const RunConfig& config);
void validate_for(CheckKind kind, const RunConfig& config);

/// Hedberg exponent q after defaulting.
double hedberg_q(const RunConfig& config);

struct InequalitySample {
    int index = 0;
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
};

struct InequalityRun {
    GridSpec grid;
    std::vector<InequalitySample> samples;  // non-degenerate only, ascending index
    int degenerate = 0;
    double constant = 0.0;  // max ratio; 0 when every sample is degenerate
    double min_ratio = 0.0;
};

/// Verdict rule: "bounded" when the coarse constant is finite and the
/// refinement stability factor fine/coarse is at most 2; "unbounded" when the
/// constant is infinite or the factor exceeds 2; "unrefined" when no pair was
/// requested; "degenerate" when every sample was skipped.
struct InequalityReport {
    CheckKind kind = CheckKind::maximal_E;
    InequalityRun coarse;
    std::optional<InequalityRun> fine;
    std::optional<double> stability;
    std::string verdict;
    std::vector<std::string> notes;
};

/// Per-sample (lhs, rhs) of one check; exposed for tests.
std::pair<double, double> evaluate_sample(CheckKind kind, const Field& f, const RunConfig& config);

InequalityRun run_inequality(CheckKind kind, const std::vector<Field>& corpus, const RunConfig& config);

/// Evaluates `corpus` (generated from config.corpus on its grid) and, if
/// config.refine is set, the same corpus regenerated on the refined grid.
InequalityReport verify_inequality(CheckKind kind, const std::vector<Field>& corpus, const RunConfig& config);

/// gen_corpus with the campaign's rank and causality, then verify_inequality.
InequalityReport run_campaign(CheckKind kind, const RunConfig& config);

std::string to_json(const InequalityReport& r);
/// CSV rows "kind,sample,lhs,rhs,ratio" (fine-grid rows carry kind ":fine").
std::string to_csv(const InequalityReport& r, bool header = true);

}  // namespace pk
