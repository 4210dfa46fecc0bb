#include "parakrylov/field_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <vector>

namespace pk {

namespace {

constexpr std::array<char, 8> kMagic{'P', 'K', 'F', 'L', 'D', '0', '0', '1'};
constexpr std::size_t kHeaderBytes = 8 + 4 * 3 + 2 + 8 * 3;

template <class T>
void put(std::vector<char>& buf, T v)
{
    char bytes[sizeof(T)];
    std::memcpy(bytes, &v, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
    buf.insert(buf.end(), bytes, bytes + sizeof(T));
}

template <class T>
T get(const char*& p)
{
    char bytes[sizeof(T)];
    std::memcpy(bytes, p, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
    p += sizeof(T);
    T v;
    std::memcpy(&v, bytes, sizeof(T));
    return v;
}

std::vector<char> slurp(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open '" + path + "'");
    return std::vector<char>(std::istreambuf_iterator<char>(in), {});
}

SnapshotHeader parse_header(const std::vector<char>& bytes)
{
    if (bytes.size() < kHeaderBytes || !std::equal(kMagic.begin(), kMagic.end(), bytes.begin()))
        throw ValidationError("bad header: magic mismatch");
    const char* p = bytes.data() + 8;
    SnapshotHeader h;
    h.grid.d = static_cast<int>(get<std::uint32_t>(p));
    h.grid.nx = static_cast<int>(get<std::uint32_t>(p));
    h.grid.nt = static_cast<int>(get<std::uint32_t>(p));
    const auto rank = get<std::uint8_t>(p);
    const auto dtype = get<std::uint8_t>(p);
    h.grid.L = get<double>(p);
    h.grid.T = get<double>(p);
    h.seed = get<std::uint64_t>(p);
    if (rank > 2 || dtype > 1) throw ValidationError("bad header: unknown rank or dtype code");
    h.rank = static_cast<Rank>(rank);
    h.complex = dtype == 1;
    try {
        validate(h.grid);
    } catch (const ValidationError& e) {
        throw ValidationError(std::string("bad header: ") + e.what());
    }
    return h;
}

}  // namespace

SnapshotHeader read_header(const std::string& path) { return parse_header(slurp(path)); }

template <class Scalar>
void write_field(const BasicField<Scalar>& f, const std::string& path, std::uint64_t seed)
{
    const GridSpec& g = f.grid();
    std::vector<char> buf(kMagic.begin(), kMagic.end());
    put<std::uint32_t>(buf, static_cast<std::uint32_t>(g.d));
    put<std::uint32_t>(buf, static_cast<std::uint32_t>(g.nx));
    put<std::uint32_t>(buf, static_cast<std::uint32_t>(g.nt));
    put<std::uint8_t>(buf, static_cast<std::uint8_t>(f.rank()));
    put<std::uint8_t>(buf, is_complex_v<Scalar> ? 1 : 0);
    put<double>(buf, g.L);
    put<double>(buf, g.T);
    put<std::uint64_t>(buf, seed);
    buf.reserve(buf.size() + static_cast<std::size_t>(f.points() * f.components()) * sizeof(Scalar));
    for (Index i = 0; i < f.points(); ++i)
        for (int c = 0; c < f.components(); ++c) {
            const Complex v(f.samples()(i, c));
            put<double>(buf, v.real());
            if constexpr (is_complex_v<Scalar>) put<double>(buf, v.imag());
        }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot write '" + path + "'");
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw ValidationError("write failed for '" + path + "'");
}

template <class Scalar>
BasicField<Scalar> read_field(const std::string& path)
{
    const auto bytes = slurp(path);
    const SnapshotHeader h = parse_header(bytes);
    if (h.complex != is_complex_v<Scalar>) throw ValidationError("shape mismatch: snapshot dtype differs from requested");
    const std::size_t per_value = is_complex_v<Scalar> ? 16 : 8;
    const std::size_t comps = static_cast<std::size_t>(component_count(h.rank, h.grid.d));
    const std::size_t expected = static_cast<std::size_t>(h.grid.points()) * comps * per_value;
    const std::size_t payload = bytes.size() - kHeaderBytes;
    if (payload != expected) {
        const std::size_t slice = static_cast<std::size_t>(h.grid.spatial_points()) * comps * per_value;
        if (payload > expected || payload % slice == 0)
            throw ValidationError("shape mismatch: header declares " + std::to_string(expected) + " payload bytes, file has " +
                                  std::to_string(payload));
        throw ValidationError("truncated payload");
    }
    BasicField<Scalar> f(h.grid, h.rank);
    const char* p = bytes.data() + kHeaderBytes;
    for (Index i = 0; i < f.points(); ++i)
        for (std::size_t c = 0; c < comps; ++c) {
            const double re = get<double>(p);
            if constexpr (is_complex_v<Scalar>) {
                const double im = get<double>(p);
                f.mutable_samples()(i, static_cast<Index>(c)) = Complex(re, im);
            } else {
                f.mutable_samples()(i, static_cast<Index>(c)) = re;
            }
        }
    if (vanishes_before_origin(f) && f.samples().size() > 0 && f.samples().array().abs().maxCoeff() > 0.0)
        f.set_support(Support::causal);
    return f;
}

template void write_field(const Field&, const std::string&, std::uint64_t);
template void write_field(const ComplexField&, const std::string&, std::uint64_t);
template Field read_field<double>(const std::string&);
template ComplexField read_field<Complex>(const std::string&);

}  // namespace pk
