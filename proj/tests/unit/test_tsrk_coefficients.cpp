#include <catch_amalgamated.hpp>

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "ruinrk/errors.hpp"
#include "ruinrk/tsrk_coefficients.hpp"

using namespace ruinrk;
using Catch::Matchers::WithinAbs;
using ld = long double;

// The oracle below checks each condition family as exactness on the
// monomials y(u) = u^p with u_n = 0 and h = 1, computed in long double; it
// does not reuse the Taylor-coefficient form used by the derivation.

namespace {

ld mono(ld u, int p) { return p == 0 ? 1.0L : std::pow(u, p); }
ld dmono(ld u, int p) { return p == 0 ? 0.0L : p * (p == 1 ? 1.0L : std::pow(u, p - 1)); }

// y(t) - [e1 y(0) + e2 y(-1) + a y'(c-1) + b y'(c)]
ld two_step_defect(ld t, ld e1, ld e2, ld a, ld b, ld c, int p) {
  return mono(t, p) - (e1 * mono(0, p) + e2 * mono(-1, p) + a * dmono(c - 1, p) + b * dmono(c, p));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string replace_line(std::string text, const std::string& key, const std::string& line) {
  const auto pos = text.find("\n" + key + " =");
  REQUIRE(pos != std::string::npos);
  const auto end = text.find('\n', pos + 1);
  return text.substr(0, pos + 1) + line + text.substr(end);
}

}  // namespace

TEST_CASE("derived coefficients are exact on monomials") {
  const TsrkCoefficients& k = derive_tsrk4_coefficients();
  const ld c = k.c.at(0);
  double worst = 0.0;
  auto track = [&](ld r) {
    worst = std::max(worst, static_cast<double>(std::abs(r)));
    return std::abs(r);
  };

  // advance: exact through degree 4
  for (int p = 0; p <= 4; ++p) CHECK(track(two_step_defect(1, k.theta1, k.theta2, k.v[0], k.w[0], c, p)) <= 1e-12L);
  // internal stage: exact through degree 3
  for (int p = 0; p <= 3; ++p) CHECK(track(two_step_defect(c, k.delta1[0], k.delta2[0], k.a[0], k.b[0], c, p)) <= 1e-12L);
  // history and local interpolants at the quadrature nodes
  for (std::size_t j = 0; j < 2; ++j) {
    for (int p = 0; p <= 3; ++p) {
      CHECK(track(two_step_defect(k.xi[j], k.zeta1[j], k.zeta2[j], k.rho[j], k.gamma[j], c, p)) <= 1e-12L);
      CHECK(track(two_step_defect(k.d_local[j], k.eta1[j], k.eta2[j], k.alpha[j], k.beta[j], c, p)) <= 1e-12L);
    }
  }
  // quadrature rules on [0, 1] and [0, c]
  for (int p = 0; p <= 3; ++p) {
    ld hist = 0, loc = 0;
    for (std::size_t j = 0; j < 2; ++j) {
      hist += k.omega[j] * mono(k.xi[j], p);
      loc += k.w_local[j] * mono(k.d_local[j], p);
    }
    CHECK(track(hist - 1.0L / (p + 1)) <= 1e-12L);
    CHECK(track(loc - std::pow(c, p + 1) / (p + 1)) <= 1e-12L);
  }
  // starting values: y(xi) - y(0) = sum_l gamma~_l y'(c~_l) through degree 3
  for (std::size_t j = 0; j < 2; ++j) {
    for (int p = 0; p <= 3; ++p) {
      ld r = mono(k.xi[j], p) - mono(0, p);
      for (std::size_t l = 0; l < 3; ++l) r -= k.start_gamma[j][l] * dmono(k.start_c[l], p);
      CHECK(track(r) <= 1e-12L);
    }
  }
  CHECK(worst <= 1e-12);
  CHECK(max_abs_residual(coefficient_residuals(k)) <= 1e-12);
}

TEST_CASE("consistency of the weights") {
  const TsrkCoefficients& k = derive_tsrk4_coefficients();
  const double sum = k.theta1 + k.theta2;
  CHECK(std::abs(sum - 1.0) <= std::nextafter(1.0, 2.0) - 1.0);
  CHECK(k.delta1[0] + k.delta2[0] == Catch::Approx(1.0).margin(1e-15));
}

TEST_CASE("node choices") {
  const TsrkCoefficients& k = derive_tsrk4_coefficients();
  const double c = k.c[0];
  CHECK_THAT(k.xi[0], WithinAbs(0.5 - 1.0 / (2.0 * std::sqrt(3.0)), 1e-15));
  CHECK_THAT(k.d_local[0], WithinAbs(c / 2.0 - c / (2.0 * std::sqrt(3.0)), 1e-15));
  CHECK(k.omega[0] == 0.5);
  CHECK(k.start_c == std::vector<double>{0.0, 0.5, 1.0});
}

TEST_CASE("root selection") {
  const TsrkCoefficients& k = derive_tsrk4_coefficients();
  CHECK(k.order_roots.size() >= 2);
  CHECK(k.c[0] > 0.0);
  CHECK(k.c[0] <= 1.0);
  for (double r : k.order_roots) {
    if (r > 0.0 && r <= 1.0) CHECK(std::abs(two_step_interpolant(1.0, r).eta2) >= std::abs(k.theta2) - 1e-15);
  }
  CHECK_THAT(k.c[0], WithinAbs(0.645898752982440, 1e-12));
}

TEST_CASE("two step interpolant reproduces its end points") {
  const double c = 0.6;
  const TwoStepInterpolant at0 = two_step_interpolant(0.0, c);
  CHECK_THAT(at0.eta1, WithinAbs(1.0, 1e-14));
  CHECK_THAT(at0.eta2, WithinAbs(0.0, 1e-14));
  const TwoStepInterpolant atm1 = two_step_interpolant(-1.0, c);
  CHECK_THAT(atm1.eta2, WithinAbs(1.0, 1e-14));
}

TEST_CASE("sixth order two stage coefficient file") {
  const std::string path = std::string(RUINRK_DATA_DIR) + "/tsrk6_coefficients.txt";
  const TsrkCoefficients k = load_tsrk_coefficients(path);
  CHECK(k.stages == 2);
  CHECK(k.order == 6);
  CHECK(max_abs_residual(coefficient_residuals(k)) <= 1e-12);

  // the advance is exact on monomials through degree 6
  for (int p = 0; p <= 6; ++p) {
    ld r = mono(1, p) - k.theta1 * mono(0, p) - k.theta2 * mono(-1, p);
    for (std::size_t i = 0; i < 2; ++i) r -= k.v[i] * dmono(k.c[i] - 1.0L, p) + k.w[i] * dmono(k.c[i], p);
    CHECK(std::abs(r) <= 1e-12L);
  }
}

TEST_CASE("coefficient files are validated") {
  const std::string text = read_file(std::string(RUINRK_DATA_DIR) + "/tsrk6_coefficients.txt");
  REQUIRE_NOTHROW(parse_tsrk_coefficients(text));
  CHECK_THROWS_AS(parse_tsrk_coefficients(replace_line(text, "w1", "w1 = 0.5676")), ConfigError);
  CHECK_THROWS_AS(parse_tsrk_coefficients(replace_line(text, "w1", "# w1 removed")), ConfigError);
  CHECK_THROWS_AS(parse_tsrk_coefficients(text + "extra = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_tsrk_coefficients(text + "w1 = 0.1\n"), ConfigError);
  CHECK_THROWS_AS(parse_tsrk_coefficients(replace_line(text, "w1", "w1 = abc")), ConfigError);
  CHECK_THROWS_AS(parse_tsrk_coefficients(text + "no equals sign\n"), ConfigError);
  CHECK_THROWS_AS(load_tsrk_coefficients("/nonexistent/coefficients.txt"), ConfigError);
}
