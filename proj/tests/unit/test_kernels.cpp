#include <catch_amalgamated.hpp>

#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "ruinrk/kernels.hpp"
#include "ruinrk/quadrature.hpp"

using namespace ruinrk;
using Catch::Matchers::WithinRel;

namespace {

std::vector<double> random_vector(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = u(gen);
  return v;
}

}  // namespace

TEST_CASE("simpson convolution matches the weighted sum") {
  const double h = 0.01;
  for (std::size_t n : {0u, 1u, 2u, 7u, 4096u, 10001u}) {
    const auto psi = random_vector(n + 1, 1 + n);
    const auto ker = random_vector(n + 1, 2 + n);
    double ref = 0.0;
    for (std::size_t j = 0; j <= n; ++j) ref += simpson13_weight(n, j, h) * psi[j] * ker[n - j];
    const double s = simpson_convolution(ExecPolicy::serial, psi, ker, h);
    const double p = simpson_convolution(ExecPolicy::parallel, psi, ker, h);
    if (n == 0) {
      CHECK(s == 0.0);
      CHECK(p == 0.0);
    } else {
      CHECK_THAT(s, WithinRel(ref, 1e-12));
      CHECK_THAT(p, WithinRel(s, 1e-12));
    }
  }
}

TEST_CASE("parallel sums are reproducible") {
  const auto x = random_vector(50000, 7);
  const auto y = random_vector(50000, 8);
  const double first = dot(ExecPolicy::parallel, x, y);
  for (int i = 0; i < 5; ++i) CHECK(dot(ExecPolicy::parallel, x, y) == first);
  CHECK_THAT(first, WithinRel(dot(ExecPolicy::serial, x, y), 1e-12));
}

TEST_CASE("lag stencil sum") {
  const std::size_t n = 9000;
  const auto psi = random_vector(n + 1, 11);
  std::vector<std::array<double, 4>> st(n + 1);
  const auto raw = random_vector(4 * (n + 1), 12);
  for (std::size_t j = 0; j <= n; ++j) st[j] = {raw[4 * j], raw[4 * j + 1], raw[4 * j + 2], raw[4 * j + 3]};
  const std::size_t j_first = 2, j_last = n - 2;
  double ref = 0.0;
  for (std::size_t j = j_first; j <= j_last; ++j)
    for (std::size_t i = 0; i < 4; ++i) ref += st[j][i] * psi[n - j - 1 + i];
  CHECK_THAT(lag_stencil_sum(ExecPolicy::serial, psi, st, n, j_first, j_last), WithinRel(ref, 1e-12));
  CHECK_THAT(lag_stencil_sum(ExecPolicy::parallel, psi, st, n, j_first, j_last), WithinRel(ref, 1e-12));
  CHECK(lag_stencil_sum(ExecPolicy::parallel, psi, st, n, 5, 4) == 0.0);
}

TEST_CASE("lag convolution") {
  const auto vals = random_vector(6000, 21);
  const auto ker = random_vector(6001, 22);
  double ref = 0.0;
  const std::size_t n = vals.size();
  for (std::size_t nu = 0; nu < n; ++nu) ref += vals[nu] * ker[n - nu];
  CHECK_THAT(lag_convolution(ExecPolicy::serial, vals, ker), WithinRel(ref, 1e-12));
  CHECK_THAT(lag_convolution(ExecPolicy::parallel, vals, ker), WithinRel(ref, 1e-12));
}

TEST_CASE("thread count") {
  CHECK(max_threads() >= 1);
  CHECK(to_string(ExecPolicy::serial) == "serial");
}
