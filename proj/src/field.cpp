#include "parakrylov/field.hpp"

#include <cmath>

namespace pk {

int component_count(Rank rank, int d)
{
    switch (rank) {
    case Rank::scalar: return 1;
    case Rank::vector: return d;
    case Rank::tensor: return d * d;
    }
    return 1;
}

std::string to_string(Rank rank)
{
    switch (rank) {
    case Rank::scalar: return "scalar";
    case Rank::vector: return "vector";
    case Rank::tensor: return "tensor";
    }
    return "?";
}

void require_same_layout(const GridSpec& a, Rank ra, const GridSpec& b, Rank rb, const char* what)
{
    if (!(a == b)) throw ValidationError(std::string(what) + ": grid mismatch");
    if (ra != rb) throw ValidationError(std::string(what) + ": rank mismatch");
}

template <class Scalar>
BasicField<Scalar>::BasicField(const GridSpec& grid, Rank rank, Support support)
    : grid_(grid), rank_(rank), support_(support), samples_(Samples::Zero(grid.points(), component_count(rank, grid.d)))
{
}

template <class Scalar>
BasicField<Scalar>::BasicField(const GridSpec& grid, Rank rank, Samples samples, Support support)
    : grid_(grid), rank_(rank), support_(support), samples_(std::move(samples))
{
    if (samples_.rows() != grid.points() || samples_.cols() != component_count(rank, grid.d))
        throw ValidationError("field: sample array shape inconsistent with grid and rank");
}

template class BasicField<double>;
template class BasicField<Complex>;

template <class Scalar>
SpaceSlice<Scalar> time_slice(const BasicField<Scalar>& f, Index n)
{
    const Index ns = f.grid().spatial_points();
    SpaceSlice<Scalar> s{f.grid(), f.rank(), f.samples().middleRows(n * ns, ns)};
    return s;
}

template <class Scalar>
BasicField<Scalar> operator+(const BasicField<Scalar>& a, const BasicField<Scalar>& b)
{
    require_same_layout(a.grid(), a.rank(), b.grid(), b.rank(), "field +");
    const Support s = (a.support() == Support::causal && b.support() == Support::causal) ? Support::causal : Support::full;
    return BasicField<Scalar>(a.grid(), a.rank(), a.samples() + b.samples(), s);
}

template <class Scalar>
BasicField<Scalar> operator-(const BasicField<Scalar>& a, const BasicField<Scalar>& b)
{
    require_same_layout(a.grid(), a.rank(), b.grid(), b.rank(), "field -");
    const Support s = (a.support() == Support::causal && b.support() == Support::causal) ? Support::causal : Support::full;
    return BasicField<Scalar>(a.grid(), a.rank(), a.samples() - b.samples(), s);
}

template <class Scalar>
BasicField<Scalar> operator*(double a, const BasicField<Scalar>& f)
{
    return BasicField<Scalar>(f.grid(), f.rank(), (a * f.samples().array()).matrix(), f.support());
}

template <class Scalar>
Eigen::ArrayXd magnitude(const BasicField<Scalar>& f)
{
    if (f.components() == 1) return f.samples().col(0).array().abs();
    return f.samples().rowwise().norm().array();
}

template <class Scalar>
Field abs(const BasicField<Scalar>& f)
{
    Field out(f.grid(), Rank::scalar, Field::Samples(magnitude(f).matrix()), f.support());
    return out;
}

Field real_part(const ComplexField& f) { return Field(f.grid(), f.rank(), f.samples().real(), f.support()); }

ComplexField to_complex(const Field& f) { return ComplexField(f.grid(), f.rank(), f.samples().template cast<Complex>(), f.support()); }

template <class Scalar>
double max_abs(const BasicField<Scalar>& f)
{
    return f.points() == 0 ? 0.0 : magnitude(f).maxCoeff();
}

template <class Scalar>
double relative_l2(const BasicField<Scalar>& a, const BasicField<Scalar>& b)
{
    require_same_layout(a.grid(), a.rank(), b.grid(), b.rank(), "relative_l2");
    const double num = (a.samples() - b.samples()).norm();
    const double den = b.samples().norm();
    return den > 0.0 ? num / den : num;
}

template <class Scalar>
BasicField<Scalar> causal_extend(const BasicField<Scalar>& f)
{
    BasicField<Scalar> out = f;
    const Index ns = f.grid().spatial_points();
    out.mutable_samples().topRows(f.grid().time_origin() * ns).setZero();
    out.set_support(Support::causal);
    return out;
}

template <class Scalar>
bool vanishes_before_origin(const BasicField<Scalar>& f)
{
    const Index ns = f.grid().spatial_points();
    const auto head = f.samples().topRows(f.grid().time_origin() * ns);
    return head.size() == 0 || (head.array() == Scalar(0)).all();
}

template <class Scalar>
BasicField<Scalar> parabolic_dilate(const BasicField<Scalar>& f, int lambda)
{
    if (lambda < 1) throw ValidationError("parabolic_dilate: lambda must be a positive integer");
    const GridSpec& g = f.grid();
    BasicField<Scalar> out(g, f.rank());
    const Index ns = g.spatial_points();
    std::vector<Index> idx;
    std::vector<Index> src(static_cast<std::size_t>(g.d));
    for (Index n = 0; n < g.nt; ++n) {
        const Index sn = wrap_index(g.time_origin() + Index(lambda) * lambda * (n - g.time_origin()), g.nt);
        for (Index s = 0; s < ns; ++s) {
            unflatten_spatial(s, g, idx);
            for (int a = 0; a < g.d; ++a) {
                const auto ua = static_cast<std::size_t>(a);
                src[ua] = g.space_origin() + Index(lambda) * (idx[ua] - g.space_origin());
            }
            const Index ss = flatten_spatial(src, g);
            out.mutable_samples().row(n * ns + s) = f.samples().row(sn * ns + ss);
        }
    }
    return out;
}

template <class Scalar>
BasicField<Scalar> cyclic_shift(const BasicField<Scalar>& f, const std::vector<Index>& offset)
{
    const GridSpec& g = f.grid();
    if (static_cast<int>(offset.size()) != g.d + 1) throw ValidationError("cyclic_shift: offset needs d+1 entries");
    BasicField<Scalar> out(g, f.rank(), f.support());
    const Index ns = g.spatial_points();
    std::vector<Index> idx;
    for (Index n = 0; n < g.nt; ++n) {
        const Index dn = wrap_index(n + offset[0], g.nt);
        for (Index s = 0; s < ns; ++s) {
            unflatten_spatial(s, g, idx);
            for (int a = 0; a < g.d; ++a) idx[static_cast<std::size_t>(a)] += offset[static_cast<std::size_t>(a) + 1];
            out.mutable_samples().row(dn * ns + flatten_spatial(idx, g)) = f.samples().row(n * ns + s);
        }
    }
    return out;
}

template <class Scalar>
BasicField<Scalar> component_field(const BasicField<Scalar>& f, int c)
{
    typename BasicField<Scalar>::Samples col = f.samples().col(c);
    return BasicField<Scalar>(f.grid(), Rank::scalar, std::move(col), f.support());
}

template <class Scalar>
BasicField<Scalar> stack(const std::vector<BasicField<Scalar>>& parts, Rank rank)
{
    if (parts.empty()) throw ValidationError("stack: no parts");
    const GridSpec& g = parts.front().grid();
    if (static_cast<int>(parts.size()) != component_count(rank, g.d)) throw ValidationError("stack: component count does not match rank");
    BasicField<Scalar> out(g, rank, Support::causal);
    for (std::size_t c = 0; c < parts.size(); ++c) {
        require_same_layout(parts[c].grid(), parts[c].rank(), g, Rank::scalar, "stack");
        out.mutable_samples().col(static_cast<Index>(c)) = parts[c].samples().col(0);
        if (parts[c].support() != Support::causal) out.set_support(Support::full);
    }
    return out;
}

#define PK_FIELD_INSTANTIATE(S)                                                                                      \
    template SpaceSlice<S> time_slice(const BasicField<S>&, Index);                                                  \
    template BasicField<S> operator+(const BasicField<S>&, const BasicField<S>&);                                    \
    template BasicField<S> operator-(const BasicField<S>&, const BasicField<S>&);                                    \
    template BasicField<S> operator*(double, const BasicField<S>&);                                                  \
    template Eigen::ArrayXd magnitude(const BasicField<S>&);                                                         \
    template Field abs(const BasicField<S>&);                                                                        \
    template double max_abs(const BasicField<S>&);                                                                   \
    template double relative_l2(const BasicField<S>&, const BasicField<S>&);                                         \
    template BasicField<S> causal_extend(const BasicField<S>&);                                                      \
    template bool vanishes_before_origin(const BasicField<S>&);                                                      \
    template BasicField<S> parabolic_dilate(const BasicField<S>&, int);                                              \
    template BasicField<S> cyclic_shift(const BasicField<S>&, const std::vector<Index>&);                            \
    template BasicField<S> component_field(const BasicField<S>&, int);                                               \
    template BasicField<S> stack(const std::vector<BasicField<S>>&, Rank);

PK_FIELD_INSTANTIATE(double)
PK_FIELD_INSTANTIATE(Complex)

#undef PK_FIELD_INSTANTIATE

}  // namespace pk
