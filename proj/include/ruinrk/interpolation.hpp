#pragma once

#include <array>
#include <cstddef>
#include <span>

namespace ruinrk {

/// Position of a uniform-grid Lagrange stencil around an off-grid point.
struct Stencil {
  std::size_t first = 0;           // index of the first stencil node
  std::size_t count = 0;           // number of nodes, min(4, grid size)
  std::array<double, 4> weight{};  // Lagrange weights, unused tail entries are 0
};

/// Stencil for evaluating grid data (n_values nodes, spacing h) at u.
/// Uses the 4 nodes nearest to the containing cell, shifted inward at the
/// ends of the grid; fewer nodes when the grid is shorter than 4.
/// Throws ExtrapolationError outside [0, (n_values-1) h].
Stencil cubic_stencil(std::size_t n_values, double h, double u);

/// 4-point Lagrange interpolation of grid values at an off-grid point.
double cubic_interpolate(std::span<const double> values, double h, double u);

/// Lagrange weights at t for the equispaced nodes first, first+1, ...
/// (node coordinates in units of h).
std::array<double, 4> lagrange_weights(double t, double first, std::size_t count);

}  // namespace ruinrk
