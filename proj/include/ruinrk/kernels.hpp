#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>

namespace ruinrk {

// The history sums below are the O(N) inner loops of every O(N^2) solve.
// `serial` is the plain left-to-right reference. `parallel` splits the range
// into fixed blocks of kBlock terms, sums the blocks with OpenMP and adds the
// block sums in order, so its result does not depend on the thread count.
enum class ExecPolicy { serial, parallel };

inline constexpr std::size_t kBlock = 2048;

std::string to_string(ExecPolicy policy);

/// Composite Simpson 1/3 (odd-n trapezoid tail) of g_j = psi[j] * kernel[n-j]
/// over the grid 0..n, n = psi.size() - 1. `kernel` is indexed by lag and must
/// hold at least n+1 entries.
double simpson_convolution(ExecPolicy policy, std::span<const double> psi, std::span<const double> kernel, double h);

/// sum_j sum_{i<4} stencil[j][i] * psi[n - j - 1 + i] for lag indices
/// j in [j_first, j_last]; each lag carries a precombined 4-point stencil
/// (the interior panels of the Pareto history sum).
double lag_stencil_sum(ExecPolicy policy, std::span<const double> psi, std::span<const std::array<double, 4>> stencil,
                       std::size_t n, std::size_t j_first, std::size_t j_last);

/// sum_{nu=0}^{n-1} values[nu] * kernel[n - nu], n = values.size().
double lag_convolution(ExecPolicy policy, std::span<const double> values, std::span<const double> kernel);

/// Plain dot product with the same block structure.
double dot(ExecPolicy policy, std::span<const double> x, std::span<const double> y);

/// Number of OpenMP threads available (1 when built without OpenMP).
int max_threads();

}  // namespace ruinrk
