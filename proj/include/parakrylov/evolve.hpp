#pragma once

#include <string>
#include <utility>
#include <vector>

#include "parakrylov/normbank.hpp"
#include "parakrylov/spectral.hpp"

namespace pk {

/// How the heat Duhamel integral is discretized.
///
/// exponential_euler: u_{n+1} = e^{dt Delta} u_n + phi_1 g_n with the exact
///   weight phi_1 = (1 - e^{-|xi|^2 dt}) / |xi|^2 (dt at xi = 0), starting from
///   u = 0 at the first lattice time. First order; strictly causal.
/// exponential_trapezoid: same recursion with the forcing interpolated
///   linearly over each step. Second order.
/// fourier_division: the periodic solution uhat = ghat / (i tau + |xi|^2), the
///   zero mode set to 0.
enum class DuhamelScheme { exponential_euler, exponential_trapezoid, fourier_division };

std::string to_string(DuhamelScheme s);
DuhamelScheme parse_duhamel_scheme(const std::string& s);

/// Solution of d_t u = Delta u + g, component-wise.
template <class Scalar>
BasicField<Scalar> duhamel(const BasicField<Scalar>& g, DuhamelScheme scheme = DuhamelScheme::exponential_euler);

/// duhamel(sigma(D) Div F). F is a tensor (vector result) or a vector (scalar
/// result); sigma must be a degree-0 homogeneous symbol.
template <class Scalar>
BasicField<Scalar> duhamel_div(const BasicField<Scalar>& F, const MultiplierSymbol& sigma,
                               DuhamelScheme scheme = DuhamelScheme::exponential_euler);

/// duhamel(P Div F) for a tensor F, P the Leray projector.
template <class Scalar>
BasicField<Scalar> duhamel_div_leray(const BasicField<Scalar>& F, DuhamelScheme scheme = DuhamelScheme::exponential_euler);

/// Space-time multiplier -xi_i xi_j sigma(xi) / (i tau + |xi|^2) applied to a
/// scalar field (0-based i, j), zero at the zero mode.
template <class Scalar>
BasicField<Scalar> singular_T(const BasicField<Scalar>& h, const MultiplierSymbol& sigma, int i, int j);

/// Left inverse of the exponential_euler recursion:
///   slice n = (uhat_{n+1} - e^{-|xi|^2 dt} uhat_n) / phi_1, n < Nt - 1,
/// and the last slice (whose forcing never reaches the lattice) is zero. It is
/// a consistent discretization of d_t - Delta and recovers g exactly from
/// duhamel(g) on every slice but the last.
template <class Scalar>
BasicField<Scalar> discrete_heat_operator(const BasicField<Scalar>& u);

/// The stopping metric of the Navier-Stokes iteration:
/// ||u||_{(p,q,1)} + ||grad u||_{(p/2,q/2,2)}.
struct SolutionNorm {
    KrylovKind kind = KrylovKind::E;
    double value_u = 0.0;
    double value_Du = 0.0;
    double total() const { return value_u + value_Du; }
};

/// Three-part norm of the heat estimates and of the drift fixed point:
/// ||u||_e + ||D u||_{e.derived(2)} + ||D^2 u||_{e.derived(3)}.
struct HeatSolutionNorm {
    KrylovKind kind = KrylovKind::E;
    double value_u = 0.0;
    double value_Du = 0.0;
    double value_D2u = 0.0;
    double total() const { return value_u + value_Du + value_D2u; }
};

/// p and q come from `e`; beta is fixed to 1.
SolutionNorm solution_norm(const Field& u, const ExponentTriple& e, KrylovKind kind, const SupSamplingPlan& plan);
HeatSolutionNorm heat_solution_norm(const Field& u, const ExponentTriple& e, KrylovKind kind, const SupSamplingPlan& plan);

/// Coefficients of d_t u = Delta u + b . grad u + c u + f with their norms at
/// (p, q, 1) and (p/2, q/2, 2).
struct DriftData {
    Field b;  // vector
    Field c;  // scalar
    double b_norm = 0.0;
    double c_norm = 0.0;
    /// b_norm + c_norm, the quantity the fixed point needs small. The
    /// empirical margin (1 - first contraction ratio) lands in the report.
    double smallness = 0.0;
};

DriftData make_drift_data(Field b, Field c, const ExponentTriple& e, KrylovKind kind, const SupSamplingPlan& plan);

enum class SolverVerdict { converged, diverged, max_iter };
std::string to_string(SolverVerdict v);

struct SolverOptions {
    ExponentTriple exponents{4.0, 4.0, 1.0};
    KrylovKind kind = KrylovKind::E;
    double tol = 1e-6;
    int max_iter = 30;
    /// Empty: SupSamplingPlan::dyadic of the data grid.
    std::vector<double> radii;
    int stride = 0;
};

struct SolverReport {
    std::string solver;
    int iterations = 0;
    std::vector<double> increments;  // X-norm of u_k - u_{k-1}, k = 1..iterations
    std::vector<double> ratios;      // increments[k] / increments[k-1]
    double first_iterate_norm = 0.0;
    double final_norm = 0.0;
    double residual_mild = 0.0;    // ||u - RHS(u)||_X / ||u||_X, one extra evaluation
    double residual_strong = 0.0;  // relative L2 of the discrete strong-form residual
    // Empirical constants; NaN where the corresponding datum vanishes.
    double C1 = 0.0;
    double C2 = 0.0;
    double C3 = 0.0;
    double margin = 0.0;  // 1 - first contraction ratio
    SolverVerdict verdict = SolverVerdict::max_iter;
    std::vector<std::string> warnings;
};

/// One JSON record per iteration followed by a summary record.
std::string to_json_lines(const SolverReport& r);

/// Fixed point u = duhamel(f) + duhamel(b . grad u + c u) from u_0 = 0, the
/// increments measured in the three-part norm. Converged when an increment is
/// at most tol times the first one.
std::pair<Field, SolverReport> drift_heat(const Field& f, const DriftData& drift, const SolverOptions& options);

/// Picard iteration for the Navier-Stokes mild equation
///   u = duhamel(P f) + duhamel(P Div F) - duhamel(P Div (u (x) u)),
/// u_0 = 0, the product formed in physical space from 2/3-dealiased factors
/// and dealiased again. Converged when an increment is at most tol times the
/// first-iterate norm. f (vector) and F (tensor) must vanish before t = 0.
std::pair<Field, SolverReport> nse_picard(const Field& f, const Field& F, const SolverOptions& options);

/// The quadratic term duhamel(P Div (u (x) u)) of the iteration above.
Field nse_bilinear(const Field& u);

/// Per-slice mean-zero solution of -Delta p = div div (u (x) u - F) - div f.
/// Empty f or F count as zero.
Field recover_pressure(const Field& u, const Field& F, const Field& f);

/// discrete_heat_operator(u) + Div(u (x) u) + grad p - f - Div F, with the same
/// dealiased product as the solver; the last time slice is zero.
Field momentum_residual(const Field& u, const Field& p, const Field& F, const Field& f);

/// L2 norm of momentum_residual relative to that of f + Div F over the same
/// slices (absolute when the forcing vanishes).
double relative_momentum_residual(const Field& u, const Field& p, const Field& F, const Field& f);

}  // namespace pk
