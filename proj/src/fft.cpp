#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

namespace pk::fft {

namespace {

enum class Kind { c2c_fwd, c2c_bwd, r2c, c2r };

using Key = std::tuple<Kind, std::vector<int>, int, bool, bool>;

std::mutex& planner_mutex()
{
    static std::mutex m;
    return m;
}

std::map<Key, fftw_plan>& plan_cache()
{
    static std::map<Key, fftw_plan> cache;
    return cache;
}

Index product(std::span<const int> dims)
{
    Index n = 1;
    for (int v : dims) n *= v;
    return n;
}

fftw_plan get_plan(Kind kind, std::span<const int> dims, int howmany, bool in_place, bool aligned)
{
    Key key{kind, std::vector<int>(dims.begin(), dims.end()), howmany, in_place, aligned};
    std::lock_guard lock(planner_mutex());
    auto& cache = plan_cache();
    if (auto it = cache.find(key); it != cache.end()) return it->second;

    const int rank = static_cast<int>(dims.size());
    const Index n = product(dims);
    // SIMD codelets need buffers with the planning arrays' alignment
    const unsigned flags = aligned ? FFTW_ESTIMATE : FFTW_ESTIMATE | FFTW_UNALIGNED;
    fftw_plan plan = nullptr;
    switch (kind) {
    case Kind::c2c_fwd:
    case Kind::c2c_bwd: {
        auto* a = fftw_alloc_complex(static_cast<std::size_t>(n * howmany));
        auto* b = in_place ? a : fftw_alloc_complex(static_cast<std::size_t>(n * howmany));
        const int sign = kind == Kind::c2c_fwd ? FFTW_FORWARD : FFTW_BACKWARD;
        plan = fftw_plan_many_dft(rank, dims.data(), howmany, a, nullptr, 1, static_cast<int>(n), b, nullptr, 1,
                                  static_cast<int>(n), sign, flags);
        if (b != a) fftw_free(b);
        fftw_free(a);
        break;
    }
    case Kind::r2c: {
        auto* a = fftw_alloc_real(static_cast<std::size_t>(n));
        auto* b = fftw_alloc_complex(static_cast<std::size_t>(half_size(dims)));
        plan = fftw_plan_dft_r2c(rank, dims.data(), a, b, flags);
        fftw_free(b);
        fftw_free(a);
        break;
    }
    case Kind::c2r: {
        auto* a = fftw_alloc_complex(static_cast<std::size_t>(half_size(dims)));
        auto* b = fftw_alloc_real(static_cast<std::size_t>(n));
        plan = fftw_plan_dft_c2r(rank, dims.data(), a, b, flags);
        fftw_free(b);
        fftw_free(a);
        break;
    }
    }
    cache.emplace(std::move(key), plan);
    return plan;
}

fftw_complex* as_fftw(Complex* p) { return reinterpret_cast<fftw_complex*>(p); }

bool simd_aligned(const void* p) { return fftw_alignment_of(static_cast<double*>(const_cast<void*>(p))) == 0; }

}  // namespace

Index half_size(std::span<const int> dims)
{
    Index n = 1;
    for (std::size_t i = 0; i + 1 < dims.size(); ++i) n *= dims[i];
    return n * (dims.back() / 2 + 1);
}

void c2c(std::span<const int> dims, int howmany, const Complex* in, Complex* out, Direction dir)
{
    const bool in_place = in == out;
    fftw_plan plan = get_plan(dir == Direction::forward ? Kind::c2c_fwd : Kind::c2c_bwd, dims, howmany, in_place,
                              simd_aligned(in) && simd_aligned(out));
    fftw_execute_dft(plan, as_fftw(const_cast<Complex*>(in)), as_fftw(out));
}

void r2c(std::span<const int> dims, const double* in, Complex* out)
{
    fftw_plan plan = get_plan(Kind::r2c, dims, 1, false, simd_aligned(in) && simd_aligned(out));
    fftw_execute_dft_r2c(plan, const_cast<double*>(in), as_fftw(out));
}

void c2r(std::span<const int> dims, const Complex* in, double* out)
{
    std::vector<Complex> scratch(in, in + half_size(dims));
    fftw_plan plan = get_plan(Kind::c2r, dims, 1, false, simd_aligned(scratch.data()) && simd_aligned(out));
    fftw_execute_dft_c2r(plan, as_fftw(scratch.data()), out);
}

}  // namespace pk::fft
