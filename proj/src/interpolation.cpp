#include "ruinrk/interpolation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ruinrk/errors.hpp"

namespace ruinrk {

std::array<double, 4> lagrange_weights(double t, double first, std::size_t count) {
  std::array<double, 4> w{};
  for (std::size_t i = 0; i < count; ++i) {
    const double xi = first + static_cast<double>(i);
    double li = 1.0;
    for (std::size_t j = 0; j < count; ++j) {
      if (j == i) continue;
      const double xj = first + static_cast<double>(j);
      li *= (t - xj) / (xi - xj);
    }
    w[i] = li;
  }
  return w;
}

Stencil cubic_stencil(std::size_t n_values, double h, double u) {
  if (n_values == 0) throw ExtrapolationError("interpolation on an empty grid");
  const double last = static_cast<double>(n_values - 1);
  const double t = u / h;
  // Allow for rounding in u = n h reconstructed by the caller.
  constexpr double slack = 1e-9;
  if (!(t >= -slack && t <= last + slack)) {
    throw ExtrapolationError("interpolation point " + std::to_string(u) + " outside grid [0, " +
                             std::to_string(last * h) + "]");
  }
  Stencil s;
  if (n_values == 1) {
    s.first = 0;
    s.count = 1;
    s.weight[0] = 1.0;
    return s;
  }
  const double tc = std::clamp(t, 0.0, last);
  // u = n h reconstructed in floating point lands within a few ulps of n.
  const double node = std::round(tc);
  if (std::abs(tc - node) <= 8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, tc)) {
    s.first = static_cast<std::size_t>(node);
    s.count = 1;
    s.weight[0] = 1.0;
    return s;
  }
  s.count = std::min<std::size_t>(4, n_values);
  const auto cell = std::min<std::size_t>(static_cast<std::size_t>(std::floor(tc)), n_values - 2);
  const std::size_t lo = cell > 0 ? cell - 1 : 0;
  s.first = std::min(lo, n_values - s.count);
  s.weight = lagrange_weights(tc, static_cast<double>(s.first), s.count);
  return s;
}

double cubic_interpolate(std::span<const double> values, double h, double u) {
  const Stencil s = cubic_stencil(values.size(), h, u);
  double sum = 0.0;
  for (std::size_t i = 0; i < s.count; ++i) sum += s.weight[i] * values[s.first + i];
  return sum;
}

}  // namespace ruinrk
