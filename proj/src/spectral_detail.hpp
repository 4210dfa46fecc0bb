#pragma once

// Shared helpers for modules that work on raw lattice spectra.

#include <vector>

#include "parakrylov/spectral.hpp"

namespace pk::detail {

/// Unnormalized forward DFT of one lattice array.
Eigen::VectorXcd spectrum_of(const GridSpec& g, const Eigen::Ref<const Eigen::VectorXcd>& samples);
/// Normalized inverse DFT, in place.
void invert_in_place(const GridSpec& g, Eigen::VectorXcd& buf);

/// Spatial-only transforms applied to every time slice.
void spatial_forward(const GridSpec& g, Eigen::VectorXcd& buf);
void spatial_backward(const GridSpec& g, Eigen::VectorXcd& buf);

/// Symbol values on the lattice: Ns entries for spatial symbols, the full
/// lattice for space-time ones.
std::vector<Complex> tabulate(const FrequencyTable& table, const MultiplierSymbol& symbol);
void multiply(Eigen::VectorXcd& buf, const std::vector<Complex>& tab, Index ns);

template <class Scalar>
void store(BasicField<Scalar>& out, int c, const Eigen::VectorXcd& buf);

}  // namespace pk::detail
