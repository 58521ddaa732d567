#include "ruinrk/kernels.hpp"

#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "ruinrk/errors.hpp"

namespace ruinrk {

std::string to_string(ExecPolicy policy) { return policy == ExecPolicy::serial ? "serial" : "parallel"; }

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace {

struct Pair {
  double first = 0.0;
  double second = 0.0;
};

// Applies `body(begin, end)` to [begin, end) either in one piece or in fixed
// blocks summed in block order.
template <class Body>
Pair blocked(ExecPolicy policy, std::size_t begin, std::size_t end, Body body) {
  if (end <= begin) return {};
  const std::size_t count = end - begin;
  if (policy == ExecPolicy::serial || count <= kBlock) return body(begin, end);

  const std::size_t n_blocks = (count + kBlock - 1) / kBlock;
  std::vector<Pair> partial(n_blocks);
  const auto nb = static_cast<long long>(n_blocks);
#pragma omp parallel for schedule(static)
  for (long long b = 0; b < nb; ++b) {
    const std::size_t lo = begin + static_cast<std::size_t>(b) * kBlock;
    const std::size_t hi = lo + kBlock < end ? lo + kBlock : end;
    partial[static_cast<std::size_t>(b)] = body(lo, hi);
  }
  Pair total;
  for (const Pair& p : partial) {
    total.first += p.first;
    total.second += p.second;
  }
  return total;
}

}  // namespace

double simpson_convolution(ExecPolicy policy, std::span<const double> psi, std::span<const double> kernel, double h) {
  if (psi.empty()) throw DomainError("simpson_convolution needs at least one sample");
  const std::size_t n = psi.size() - 1;
  if (kernel.size() < n + 1) throw DomainError("kernel table shorter than the history");
  if (n == 0) return 0.0;

  auto g = [&](std::size_t j) { return psi[j] * kernel[n - j]; };
  const std::size_t k = (n % 2 == 0) ? n : n - 1;
  double result = 0.0;
  if (k > 0) {
    // first: odd interior samples, second: even interior samples.
    const Pair sums = blocked(policy, 1, k, [&](std::size_t lo, std::size_t hi) {
      Pair p;
      for (std::size_t j = lo; j < hi; ++j) {
        if (j % 2 == 1) {
          p.first += g(j);
        } else {
          p.second += g(j);
        }
      }
      return p;
    });
    result = h / 3.0 * (g(0) + g(k) + 4.0 * sums.first + 2.0 * sums.second);
  }
  if (k != n) result += h / 2.0 * (g(n - 1) + g(n));
  return result;
}

double lag_stencil_sum(ExecPolicy policy, std::span<const double> psi, std::span<const std::array<double, 4>> stencil,
                       std::size_t n, std::size_t j_first, std::size_t j_last) {
  if (j_last < j_first) return 0.0;
  if (j_first < 2 || j_last + 2 > n + 1 || j_last >= stencil.size() || psi.size() < n + 1) {
    throw DomainError("lag_stencil_sum range leaves the interior of the grid");
  }
  const Pair sum = blocked(policy, j_first, j_last + 1, [&](std::size_t lo, std::size_t hi) {
    Pair p;
    for (std::size_t j = lo; j < hi; ++j) {
      const double* v = psi.data() + (n - j - 1);
      const auto& c = stencil[j];
      p.first += c[0] * v[0] + c[1] * v[1] + c[2] * v[2] + c[3] * v[3];
    }
    return p;
  });
  return sum.first;
}

double lag_convolution(ExecPolicy policy, std::span<const double> values, std::span<const double> kernel) {
  const std::size_t n = values.size();
  if (n == 0) return 0.0;
  if (kernel.size() < n + 1) throw DomainError("kernel table shorter than the history");
  return blocked(policy, 0, n,
                 [&](std::size_t lo, std::size_t hi) {
                   Pair p;
                   for (std::size_t nu = lo; nu < hi; ++nu) p.first += values[nu] * kernel[n - nu];
                   return p;
                 })
      .first;
}

double dot(ExecPolicy policy, std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DomainError("dot product of unequal lengths");
  return blocked(policy, 0, x.size(),
                 [&](std::size_t lo, std::size_t hi) {
                   Pair p;
                   for (std::size_t i = lo; i < hi; ++i) p.first += x[i] * y[i];
                   return p;
                 })
      .first;
}

}  // namespace ruinrk
