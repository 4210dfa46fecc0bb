#pragma once

#include <cstdint>
#include <string>

#include "parakrylov/field.hpp"

namespace pk {

/// Snapshot layout: "PKFLD001", u32 d, u32 Nx, u32 Nt, u8 rank, u8 dtype
/// (0 real, 1 complex), f64 L, f64 T, u64 seed, then samples with t
/// outermost and components innermost. Everything little-endian.
struct SnapshotHeader {
    GridSpec grid;
    Rank rank = Rank::scalar;
    bool complex = false;
    std::uint64_t seed = 0;
};

SnapshotHeader read_header(const std::string& path);

template <class Scalar>
void write_field(const BasicField<Scalar>& f, const std::string& path, std::uint64_t seed = 0);

/// Throws ValidationError with "bad header", "shape mismatch" or
/// "truncated payload".
template <class Scalar>
BasicField<Scalar> read_field(const std::string& path);

}  // namespace pk
