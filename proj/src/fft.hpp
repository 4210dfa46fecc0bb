#pragma once

// Thin FFTW wrapper. Plans are created once per (kind, dims, batch) under a
// mutex and executed with the new-array interface, so callers may transform
// any buffer of the planned shape from any thread.

#include <span>
#include <vector>

#include "parakrylov/grid.hpp"

namespace pk::fft {

enum class Direction { forward, backward };

/// Unnormalized complex transform of `howmany` contiguous blocks of shape
/// `dims` (row-major). In-place when in == out.
void c2c(std::span<const int> dims, int howmany, const Complex* in, Complex* out, Direction dir);

/// Real-to-half-complex transform of one array of shape `dims`; output shape
/// is dims with the last extent replaced by dims.back()/2 + 1.
void r2c(std::span<const int> dims, const double* in, Complex* out);

/// Inverse of r2c (unnormalized). `in` is copied internally and preserved.
void c2r(std::span<const int> dims, const Complex* in, double* out);

Index half_size(std::span<const int> dims);

}  // namespace pk::fft
