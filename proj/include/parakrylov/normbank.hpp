#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "parakrylov/field.hpp"

namespace pk {

/// (p, q, beta) with 1 < p, q and 0 < beta < 2/p + d/q.
struct ExponentTriple {
    double p = 4.0;
    double q = 4.0;
    double beta = 1.0;

    /// (p/k, q/k, beta + k - 1): the triples attached to k-th order terms.
    ExponentTriple derived(int k) const { return {p / k, q / k, beta + k - 1}; }
    /// (p s, q s, beta / s) with s = beta / (beta - alpha): the Riesz-mapped triple.
    ExponentTriple riesz_mapped(double alpha) const;
};

bool admissible(const ExponentTriple& e, int d);
void require_admissible(const ExponentTriple& e, int d, const std::string& what);
std::string to_string(const ExponentTriple& e);

enum class KrylovKind { E, F };
enum class CylinderKind { ball, cylinder };
enum class AxisOrder { time_outer, space_outer };

/// Parabolic ball {sqrt|t - s| + |x - y| < rho} or cylinder
/// {|t - s| < rho^2} x {|x - y| < rho} around a lattice point. Membership is
/// decided on minimal-image lattice offsets; each lattice point counts once.
struct CylinderSpec {
    Index n = 0;
    std::vector<Index> x;
    double radius = 0.0;
    CylinderKind kind = CylinderKind::cylinder;
};

/// Flat lattice indices of the points inside `c`, ascending.
std::vector<Index> cylinder_members(const GridSpec& grid, const CylinderSpec& c);

/// Dyadic radii and strided centres discretizing a sup over (rho, t, x).
/// Centres are the lattice points whose offsets from the lattice origin are
/// multiples of the strides.
struct SupSamplingPlan {
    std::vector<double> radii;
    int stride = 1;
    int time_stride = 1;

    /// rho_min * 2^j for j = 0..J with rho_max <= L/4; rho_min defaults to 2 dx,
    /// stride to Nx/16 (time stride scaled by Nt/Nx).
    static SupSamplingPlan dyadic(const GridSpec& grid, double rho_min = 0.0, int stride = 0);
    /// Same radii, every lattice point a centre.
    SupSamplingPlan dense() const { return {radii, 1, 1}; }
};

void validate(const SupSamplingPlan& plan, const GridSpec& grid);

struct NormReport {
    std::string norm_kind;
    std::vector<double> exponents;
    double value = 0.0;
    std::optional<CylinderSpec> argmax;
    std::optional<double> argmax_theta;
    std::optional<SupSamplingPlan> plan;
};

std::string to_json(const NormReport& r);

/// Cell-weighted iterated Lebesgue norm; time_outer is L^p_t L^q_x,
/// space_outer is L^q_x L^p_t. With a region only its members contribute.
template <class Scalar>
double mixed_norm(const BasicField<Scalar>& f, double p, double q, AxisOrder order = AxisOrder::time_outer,
                  const std::optional<CylinderSpec>& region = std::nullopt);

template <class Scalar>
double lp_norm(const BasicField<Scalar>& f, double p);

/// Iterated norm over the lattice axes (t, x_1, ..., x_d) with one exponent
/// per axis; the innermost integral runs over the last axis.
double axis_mixed_norm(const Eigen::ArrayXd& values, const GridSpec& grid, const std::vector<double>& exponents);

/// Weighted local norm of the Krylov definition on one cylinder, by direct
/// summation over the stencil.
template <class Scalar>
double local_krylov(const BasicField<Scalar>& f, const ExponentTriple& e, KrylovKind kind, const CylinderSpec& c);

/// sup over the plan of the weighted local mixed norm. The returned value is
/// the direct re-evaluation on the reported arg-max cylinder.
template <class Scalar>
NormReport krylov_norm(const BasicField<Scalar>& f, const ExponentTriple& e, KrylovKind kind, const SupSamplingPlan& plan);
template <class Scalar>
NormReport krylov_norm(const BasicField<Scalar>& f, const ExponentTriple& e, KrylovKind kind = KrylovKind::E);

/// mu(B)^{1/r - 1/p} ||f 1_B||_p on one parabolic ball, mu(B) being the
/// member count times the cell volume.
template <class Scalar>
double local_morrey(const BasicField<Scalar>& f, double p, double r, const CylinderSpec& ball);

template <class Scalar>
NormReport morrey_norm(const BasicField<Scalar>& f, double p, double r, const SupSamplingPlan& plan);
template <class Scalar>
NormReport morrey_norm(const BasicField<Scalar>& f, double p, double r);

/// `count` values geometrically spaced over [dt, T].
std::vector<double> default_theta_plan(const GridSpec& grid, int count = 32);

/// max over theta of theta^{delta/2} ||gauss_flow(f, theta)||_inf.
template <class Scalar>
NormReport besov_heat_norm(const BasicField<Scalar>& f, double delta, const std::vector<double>& thetas);
template <class Scalar>
NormReport besov_heat_norm(const BasicField<Scalar>& f, double delta);

/// Smooth parabolic cutoff: 1 for sqrt|tau| + |xi| < 1, 0 beyond 2, built
/// from exp(-1/x).
double lp_cutoff(double tau, double xi_norm);

/// Block indices j whose scale 2^j meets the lattice frequency range.
std::pair<int, int> resolvable_blocks(const GridSpec& grid);

/// max over resolvable j of 2^{-j delta} ||S_j f||_inf, where S_j has symbol
/// lp_cutoff(tau / 4^j, xi / 2^j).
template <class Scalar>
double besov_lp_norm(const BasicField<Scalar>& f, double delta);

struct DecayProfile {
    std::vector<std::pair<double, double>> samples;  // (theta, ||gauss_flow(f, theta)||_inf)
    bool zero_at_infinity = false;
};

/// Verdict: the last third of the profile is non-increasing and the final
/// value is at most `tolerance` times the profile maximum (or everything is 0).
template <class Scalar>
DecayProfile decay_profile(const BasicField<Scalar>& f, const std::vector<double>& thetas, double tolerance = 0.5);

/// Least-squares slope of -log ||.|| against log theta over samples in [lo, hi].
double decay_exponent(const DecayProfile& profile, double lo, double hi);

}  // namespace pk
