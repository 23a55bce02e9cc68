#pragma once

#include "kgfield/lattice.hpp"

namespace kgfield {

// Unnormalized in-place complex DFTs over a row-major grid of the given shape.
void fft_forward(CGrid& data, const std::array<int, 3>& shape);
void fft_backward(CGrid& data, const std::array<int, 3>& shape);

/// Samples of sum_k c_k e^{ik.x} on the lattice nodes.
CGrid to_grid(const CGrid& coeffs, const Lattice& lattice);
/// Inverse of to_grid: mode coefficients of a node-sampled grid.
CGrid to_coeffs(const CGrid& grid, const Lattice& lattice);

/// Re-index mode coefficients onto a lattice over the same box with more
/// points; new modes are zero.
CGrid pad_coeffs(const CGrid& coeffs, const Lattice& from, const Lattice& to);
/// Truncate coefficients from a refined lattice back to a coarser one.
CGrid truncate_coeffs(const CGrid& coeffs, const Lattice& from, const Lattice& to);

/// Multiply each mode by (k^2 + M^2)^alpha.
void scale_D_power(CGrid& coeffs, const Lattice& lattice, double mass, double alpha);

/// (-laplacian + M^2)^alpha applied to a node-sampled grid.
CGrid apply_D_power(const CGrid& grid, double alpha, const Lattice& lattice, double mass);

/// Spectral partial derivative along one axis, in coefficient space.
CGrid derivative_coeffs(const CGrid& coeffs, const Lattice& lattice, int axis);

} // namespace kgfield
