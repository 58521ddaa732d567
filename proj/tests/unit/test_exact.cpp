#include <catch_amalgamated.hpp>

#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "ruinrk/errors.hpp"
#include "ruinrk/exact.hpp"

using namespace ruinrk;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("exponential closed form") {
  const ModelParams model(ClaimDistribution::exponential(1.0), 0.2);
  CHECK_THAT(exact_exponential(model, 0.0), WithinRel(1.0 / 1.2, 1e-15));
  CHECK_THAT(exact_exponential(model, 1.0), WithinAbs(0.705401, 5e-7));
  CHECK(exact_exponential(model, 50.0) < 1e-3);
  CHECK_THROWS_AS(exact_exponential(ModelParams(ClaimDistribution::gamma2(1.0), 0.2), 1.0), ModelError);
}

TEST_CASE("Erlang-2 closed form values") {
  const ModelParams t1(ClaimDistribution::gamma2(2.4), 0.2);
  // the published survival column is truncated to 5 decimals
  CHECK(std::floor((1.0 - exact_gamma2(t1, 1.0)) * 1e5) / 1e5 == Catch::Approx(0.35167).margin(1e-12));
  CHECK(std::floor((1.0 - exact_gamma2(t1, 6.0)) * 1e5) / 1e5 == Catch::Approx(0.83355).margin(1e-12));
  CHECK_THAT(exact_gamma2(t1, 0.0), WithinRel(1.0 / 1.2, 1e-14));
  const ModelParams t2(ClaimDistribution::gamma2(1.0), 1.5);
  CHECK_THAT(exact_gamma2(t2, 0.654427), WithinAbs(0.320476925, 5e-9));
  CHECK_THAT(exact_gamma2(t2, 0.0), WithinRel(0.4, 1e-14));
  CHECK_THROWS_AS(exact_gamma2(ModelParams(ClaimDistribution::pareto_lomax(1), 1.0), 1.0), ModelError);
  CHECK_FALSE(has_exact_solution(ModelParams(ClaimDistribution::pareto_lomax(1), 1.0)));
  CHECK(has_exact_solution(t1));
}

TEST_CASE("roots solve the characteristic quadratic") {
  for (double beta : {0.5, 1.0, 2.4, 10.0}) {
    for (double theta : {0.05, 0.2, 1.5, 20.0}) {
      const ModelParams model(ClaimDistribution::gamma2(beta), theta);
      const Gamma2ExactSolution s = gamma2_exact_solution(model);
      const double lc = lambda_over_c(model);
      for (double r : {s.s1, s.s2}) {
        const double q = r * r + (2 * beta - lc) * r + beta * beta - 2 * beta * lc;
        CHECK(std::abs(q) <= 1e-12 * std::max(1.0, beta * beta));
        CHECK(r < 0.0);
      }
      CHECK(std::abs(s.s1) < std::abs(s.s2));
      CHECK_THAT(s(0.0), WithinRel(psi_at_zero(theta), 1e-13));
      CHECK_THAT(s.derivative(0.0), WithinAbs(lc * (psi_at_zero(theta) - 1.0), 1e-13));
    }
  }
}

TEST_CASE("closed form satisfies the integro-differential equation") {
  boost::math::quadrature::gauss_kronrod<double, 31> gk;
  const ModelParams model(ClaimDistribution::gamma2(2.4), 0.2);
  const Gamma2ExactSolution s = gamma2_exact_solution(model);
  const double lc = lambda_over_c(model);
  double worst = 0.0;
  for (double u : {0.1, 0.5, 1.0, 2.7, 5.0, 9.9}) {
    const double conv = gk.integrate([&](double z) { return s(z) * model.claims().density(u - z); }, 0.0, u, 15, 1e-14);
    const double r = s.derivative(u) - lc * (s(u) - conv - model.claims().tail(u));
    worst = std::max(worst, std::abs(r));
  }
  CHECK(worst <= 1e-12);
}
