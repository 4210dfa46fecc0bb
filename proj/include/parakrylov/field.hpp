#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "parakrylov/grid.hpp"

namespace pk {

enum class Rank : std::uint8_t { scalar = 0, vector = 1, tensor = 2 };
enum class Support { full, causal };

/// Number of components carried by a field of the given rank in dimension d.
int component_count(Rank rank, int d);
std::string to_string(Rank rank);

template <class Scalar>
inline constexpr bool is_complex_v = std::is_same_v<Scalar, Complex>;

/// Sampled function on a GridSpec lattice.
///
/// Samples live in a (points x components) column-major Eigen matrix, so each
/// component is one contiguous lattice array. Fields are values: operations
/// return new fields and never mutate their inputs.
template <class Scalar>
class BasicField {
public:
    using scalar_type = Scalar;
    using Samples = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

    BasicField() = default;
    BasicField(const GridSpec& grid, Rank rank, Support support = Support::full);
    BasicField(const GridSpec& grid, Rank rank, Samples samples, Support support = Support::full);

    const GridSpec& grid() const { return grid_; }
    Rank rank() const { return rank_; }
    Support support() const { return support_; }
    int components() const { return static_cast<int>(samples_.cols()); }
    Index points() const { return samples_.rows(); }

    const Samples& samples() const { return samples_; }
    /// Mutable access for builders; callers own the consistency of `support`.
    Samples& mutable_samples() { return samples_; }
    void set_support(Support s) { support_ = s; }

    auto component(int c) const { return samples_.col(c); }
    auto component(int c) { return samples_.col(c); }

    Index index(Index n, Index s) const { return n * grid_.spatial_points() + s; }
    Scalar at(Index n, Index s, int c = 0) const { return samples_(index(n, s), c); }

private:
    GridSpec grid_{};
    Rank rank_ = Rank::scalar;
    Support support_ = Support::full;
    Samples samples_;
};

using Field = BasicField<double>;
using ComplexField = BasicField<Complex>;

extern template class BasicField<double>;
extern template class BasicField<Complex>;

/// One time slice of a field (Nx^d points).
template <class Scalar>
struct SpaceSlice {
    GridSpec grid;
    Rank rank = Rank::scalar;
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> samples;
};

template <class Scalar>
SpaceSlice<Scalar> time_slice(const BasicField<Scalar>& f, Index n);

// Arithmetic. Operands must share grid and rank.
template <class Scalar>
BasicField<Scalar> operator+(const BasicField<Scalar>& a, const BasicField<Scalar>& b);
template <class Scalar>
BasicField<Scalar> operator-(const BasicField<Scalar>& a, const BasicField<Scalar>& b);
template <class Scalar>
BasicField<Scalar> operator*(double a, const BasicField<Scalar>& f);
template <class Scalar>
BasicField<Scalar> operator*(const BasicField<Scalar>& f, double a) { return a * f; }

/// Pointwise Euclidean (Frobenius for tensors) magnitude over components.
template <class Scalar>
Eigen::ArrayXd magnitude(const BasicField<Scalar>& f);

/// Scalar field holding the pointwise magnitude.
template <class Scalar>
Field abs(const BasicField<Scalar>& f);

Field real_part(const ComplexField& f);
ComplexField to_complex(const Field& f);

template <class Scalar>
double max_abs(const BasicField<Scalar>& f);

/// Relative L2 distance ||a - b|| / ||b|| (absolute when b vanishes).
template <class Scalar>
double relative_l2(const BasicField<Scalar>& a, const BasicField<Scalar>& b);

/// Zeroes every negative-time sample (the first nt/2 time indices) and marks
/// the field causal. Idempotent.
template <class Scalar>
BasicField<Scalar> causal_extend(const BasicField<Scalar>& f);

/// True when every negative-time sample is exactly zero.
template <class Scalar>
bool vanishes_before_origin(const BasicField<Scalar>& f);

/// Parabolic dilate u(lambda^2 t, lambda x) about the lattice origin, realized
/// by index dilation on the periodic lattice (exact for periodic data).
template <class Scalar>
BasicField<Scalar> parabolic_dilate(const BasicField<Scalar>& f, int lambda);

/// Cyclic lattice shift by (dn, ds_1, ..., ds_d).
template <class Scalar>
BasicField<Scalar> cyclic_shift(const BasicField<Scalar>& f, const std::vector<Index>& offset);

/// Extracts component c as a scalar field.
template <class Scalar>
BasicField<Scalar> component_field(const BasicField<Scalar>& f, int c);

/// Stacks scalar fields into a vector (d entries) or tensor (d*d entries) field.
template <class Scalar>
BasicField<Scalar> stack(const std::vector<BasicField<Scalar>>& parts, Rank rank);

void require_same_layout(const GridSpec& a, Rank ra, const GridSpec& b, Rank rb, const char* what);

}  // namespace pk
