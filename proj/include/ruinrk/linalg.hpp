#pragma once

#include <cstddef>
#include <vector>

namespace ruinrk {

/// Gaussian elimination with partial pivoting on a row-major n x n matrix.
/// On success the solution overwrites `rhs` and true is returned; returns
/// false as soon as a pivot falls below `pivot_tol` in magnitude.
bool solve_dense(std::vector<double>& matrix, std::vector<double>& rhs, std::size_t n, double pivot_tol);

}  // namespace ruinrk
