#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "ruinrk/errors.hpp"
#include "ruinrk/exact.hpp"
#include "ruinrk/quadrature.hpp"
#include "ruinrk/tsrk.hpp"

using namespace ruinrk;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const ModelParams table1_model{ClaimDistribution::gamma2(2.4), 0.2};
const ModelParams pareto_model{ClaimDistribution::pareto_lomax(1), 1.0};

double m2_step_error(double h) {
  const TsrkCoefficients m2 = load_tsrk_coefficients(std::string(RUINRK_DATA_DIR) + "/tsrk6_coefficients.txt");
  TsrkOptions opt;
  opt.m2_coefficients = m2;
  const SolutionPath path = solve_tsrk(table1_model, h, 4.0, TsrkScheme::gamma_ode_m2, opt);
  double e = 0.0;
  for (std::size_t n = 0; n < path.size(); ++n) e = std::max(e, std::abs(path.values[n] - exact_gamma2(table1_model, path.u_at(n))));
  return e;
}

}  // namespace

TEST_CASE("Erlang-2 ODE system") {
  const LinearOdeSystem sys = gamma2_ode_system(table1_model);
  CHECK_THAT(sys.y0[0], WithinRel(1.0 / 1.2, 1e-15));
  CHECK(sys.y0[1] == 0.0);
  CHECK(sys.y0[2] == 0.0);
  const Vec3 g0 = sys.forcing(0.0);
  CHECK_THAT(g0[0], WithinAbs(-1.0, 1e-15));
  CHECK(g0[1] == 0.0);
  CHECK(g0[2] == 0.0);
  CHECK(sys.m[3] == 1.0);
  CHECK(sys.m[4] == -2.4);
  CHECK(sys.m[5] == 0.0);
  CHECK_THROWS_AS(gamma2_ode_system(pareto_model), ModelError);
}

TEST_CASE("ODE system is solved by the closed form") {
  const LinearOdeSystem sys = gamma2_ode_system(table1_model);
  const Gamma2ExactSolution ex = gamma2_exact_solution(table1_model);
  // advance the exact psi with tiny RK4 steps and compare the first component
  Vec3 y = sys.y0;
  const double h = 1e-3;
  for (int n = 0; n < 2000; ++n) y = rk4_ode_step(sys, n * h, y, h);
  CHECK_THAT(y[0], WithinAbs(ex(2.0), 1e-12));
}

TEST_CASE("zero dynamics are a fixed point") {
  LinearOdeSystem sys;
  const TsrkCoefficients& k = derive_tsrk4_coefficients();
  TsrkStepState st;
  st.y_prev = {0.3, -1.0, 2.0};
  st.y_curr = st.y_prev;
  st.k_prev = {Vec3{0.0, 0.0, 0.0}};
  const TsrkOdeStep out = tsrk_ode_step(k, sys, st, 0.1);
  for (int i = 0; i < 3; ++i) CHECK_THAT(out.next[i], WithinAbs(st.y_curr[i], 1e-15));
}

TEST_CASE("linear test equation is advanced to fifth order locally") {
  const TsrkCoefficients& k = derive_tsrk4_coefficients();
  const double mu = -1.0;
  const double c = k.c[0];
  auto defect = [&](double h) {
    LinearOdeSystem sys;
    sys.m = {mu, 0, 0, 0, mu, 0, 0, 0, mu};
    TsrkStepState st;
    st.y_prev.fill(std::exp(-mu * h));
    st.y_curr.fill(1.0);
    const double kp = mu * std::exp(mu * (c - 1.0) * h);
    st.k_prev = {Vec3{kp, kp, kp}};
    return std::abs(tsrk_ode_step(k, sys, st, h).next[0] - std::exp(mu * h));
  };
  const double d1 = defect(0.01);
  const double d2 = defect(0.005);
  CHECK(d1 < 1e-10);
  CHECK(std::log2(d1 / d2) > 4.5);
}

TEST_CASE("singular stage matrices fail the step") {
  const TsrkCoefficients& k = derive_tsrk4_coefficients();
  LinearOdeSystem sys;
  const double h = 0.1;
  const double lam = 1.0 / (h * k.b[0]);
  sys.m = {lam, 0, 0, 0, lam, 0, 0, 0, lam};
  TsrkStepState st;
  st.y_prev = {1, 1, 1};
  st.y_curr = {1, 1, 1};
  st.k_prev = {Vec3{0, 0, 0}};
  st.n = 7;
  try {
    (void)tsrk_ode_step(k, sys, st, h);
    FAIL("expected a step failure");
  } catch (const StepFailure& e) {
    CHECK(e.step() == 7);
    CHECK(std::string(e.what()).find("h = ") != std::string::npos);
  }
}

TEST_CASE("ODE bootstrap") {
  const TsrkCoefficients& k = derive_tsrk4_coefficients();
  const LinearOdeSystem sys = gamma2_ode_system(table1_model);
  const TsrkStepState st = tsrk_ode_bootstrap(k, sys, 1e-3);
  CHECK_THAT(st.y_curr[0], WithinAbs(exact_gamma2(table1_model, 1e-3), 1e-14));
  REQUIRE(st.k_prev.size() == 1);
  const Vec3 k_at_origin = sys.rhs(0.0, sys.y0);
  CHECK_THAT(k_at_origin[0], WithinAbs(lambda_over_c(table1_model) * (psi_at_zero(0.2) - 1.0), 1e-15));
  CHECK_THAT(st.k_prev[0][0], WithinAbs(k_at_origin[0], 1e-2));
  const TsrkStepState tiny = tsrk_ode_bootstrap(k, sys, 1e-9);
  CHECK_THAT(tiny.y_curr[0], WithinAbs(sys.y0[0], 1e-8));
}

TEST_CASE("scalar bootstrap") {
  const TsrkCoefficients& k = derive_tsrk4_coefficients();
  PhlScheme phl(pareto_model, k, 1e-8, 2);
  const ScalarBootstrap b = phl.bootstrap();
  CHECK_THAT(b.psi1, WithinAbs(0.5, 1e-8));
  CHECK_THAT(b.k0, WithinAbs(0.5 * (0.5 - 1.0), 1e-7));
}

TEST_CASE("frozen unit history gives tail differences") {
  const TsrkCoefficients& k = derive_tsrk4_coefficients();
  const double h = 0.01, c = k.c[0];
  PhlScheme phl(pareto_model, k, h, 2);
  const auto& d = pareto_model.claims();
  CHECK_THAT(phl.local_integral(1.0, 1.0, 0.0, 0.0), WithinAbs(1.0 - d.tail(c * h), 1e-12));
  for (std::size_t j : {1u, 2u, 17u, 500u}) {
    const GaussRule& r = phl.cache().get(j);
    double s = 0.0;
    for (double w : r.weights) s += w;
    CHECK_THAT(s, WithinAbs(d.tail((j - 1 + c) * h) - d.tail((j + c) * h), 1e-12));
  }
  for (std::size_t n : {1u, 3u, 40u, 1000u}) {
    const std::vector<double> ones(n + 1, 1.0);
    CHECK_THAT(phl.history_integral(ones), WithinAbs(d.tail(c * h) - d.tail((n + c) * h), 1e-12));
  }
}

TEST_CASE("precombined lag stencils match panel by panel evaluation") {
  const TsrkCoefficients& k = derive_tsrk4_coefficients();
  for (int q = 1; q <= 3; ++q) {
    PhlScheme fast(pareto_model, k, 0.01, q, ExecPolicy::parallel);
    PhlScheme direct(pareto_model, k, 0.01, q, ExecPolicy::serial);
    std::mt19937_64 gen(q);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> hist(3001);
    for (double& x : hist) x = u(gen);
    for (std::size_t n : {4u, 5u, 100u, 3000u}) {
      const std::span<const double> view(hist.data(), n + 1);
      CHECK_THAT(fast.history_integral(view), WithinAbs(direct.history_integral_direct(view), 1e-13));
    }
    CHECK(fast.cache().hits() > 0);
    CHECK(fast.cache().get(12) == fast.cache().build(12));
  }
}

TEST_CASE("improper scheme in the pure tail regime") {
  const TsrkCoefficients& k = derive_tsrk4_coefficients();
  ImproperScheme imp(pareto_model, k, 0.01, 1);
  REQUIRE(imp.rule().size() == 1);
  CHECK_THAT(imp.rule().nodes[0], WithinAbs(0.5, 1e-15));
  CHECK_THAT(imp.rule().weights[0], WithinAbs(1.0, 1e-15));
  const std::vector<double> hist{0.5, 0.49, 0.48};
  CHECK(imp.improper_sum(hist, -0.2, -0.2) == imp.rule().weights[0]);
}

TEST_CASE("argument checks") {
  CHECK_THROWS_AS(solve_tsrk(table1_model, 0.1, 0.15, TsrkScheme::gamma_ode_m1), DomainError);
  CHECK_THROWS_AS(solve_tsrk(pareto_model, 0.1, 0.1, TsrkScheme::pareto_phl), DomainError);
  CHECK_THROWS_AS(solve_tsrk(table1_model, 0.1, 1.0, TsrkScheme::gamma_ode_m2), ConfigError);
  CHECK_THROWS_AS(solve_tsrk(table1_model, 0.1, 1.0, TsrkScheme::pareto_phl), ModelError);
  CHECK_THROWS_AS(solve_tsrk(pareto_model, 0.1, 1.0, TsrkScheme::gamma_ode_m1), ModelError);
  CHECK_THROWS_AS(parse_tsrk_scheme("gamma-ode-m3"), ConfigError);
  CHECK(parse_tsrk_scheme(to_string(TsrkScheme::pareto_improper)) == TsrkScheme::pareto_improper);
}

TEST_CASE("convolution component of the ODE state") {
  const double h = 0.0016;
  const auto& k = derive_tsrk4_coefficients();
  const std::vector<Vec3> ys = solve_tsrk_ode_states(table1_model, k, h, 10.0);
  std::vector<double> psi;
  for (const Vec3& y : ys) psi.push_back(y[0]);
  for (double u : {1.0, 5.0, 10.0}) {
    const std::size_t n = static_cast<std::size_t>(std::lround(u / h));
    std::vector<double> g(n + 1);
    for (std::size_t j = 0; j <= n; ++j) g[j] = psi[j] * table1_model.claims().density((n - j) * h);
    CHECK_THAT(ys[n][2], WithinAbs(simpson13_history(g, h), 2e-6));
  }
}

TEST_CASE("fourth order scheme for exponential claims") {
  const ModelParams model(ClaimDistribution::exponential(1.0), 0.2);
  auto err = [&](double h) {
    const SolutionPath p = solve_tsrk(model, h, 10.0, TsrkScheme::legendre_history);
    double e = 0.0;
    for (std::size_t n = 0; n < p.size(); ++n) e = std::max(e, std::abs(p.values[n] - exact_exponential(model, p.u_at(n))));
    return e;
  };
  const double e1 = err(0.02), e2 = err(0.01);
  CHECK(e1 < 1e-7);
  const double order = std::log2(e1 / e2);
  CHECK(order >= 3.5);
  CHECK(order <= 4.5);
}

TEST_CASE("two stage method converges faster than fourth order") {
  const double e1 = m2_step_error(0.04);
  const double e2 = m2_step_error(0.02);
  CHECK(std::log2(e1 / e2) > 5.0);
}

TEST_CASE("pareto history-local paths are monotone and policy independent") {
  const SolutionPath par = solve_tsrk(ModelParams(ClaimDistribution::pareto_lomax(1), 0.25), 0.01, 30.0,
                                      TsrkScheme::pareto_phl, {2, std::nullopt, ExecPolicy::parallel});
  const SolutionPath ser = solve_tsrk(ModelParams(ClaimDistribution::pareto_lomax(1), 0.25), 0.01, 30.0,
                                      TsrkScheme::pareto_phl, {2, std::nullopt, ExecPolicy::serial});
  double worst = 0.0;
  for (std::size_t i = 0; i < par.size(); ++i) worst = std::max(worst, std::abs(par.values[i] - ser.values[i]));
  CHECK(worst <= 1e-13);
  CHECK(monotonicity_violation(par.values, 0.8) == 0.0);
  CHECK(std::stoul(par.metadata.at("rule_cache_misses")) == par.size() - 2);
}

TEST_CASE("published Erlang-2 two-step values") {
  const ModelParams t2(ClaimDistribution::gamma2(1.0), 1.5);
  const SolutionPath path = solve_tsrk(t2, 0.0016, 15.0, TsrkScheme::gamma_ode_m1);
  const std::vector<std::pair<double, double>> rows{
      {0.654427, 0.32048034341}, {1.37683, 0.24179489535}, {2.18027, 0.17305279489}, {3.08527, 0.11728660786},
      {4.12126, 0.07455299419},  {5.33268, 0.04375170600}, {6.79131, 0.02298140139}, {8.62459, 0.01023311279},
      {11.0941, 0.00343629080},  {14.892, 0.00064222919}};
  // published values are the grid values at the nearest node
  for (const auto& [u, printed] : rows) CHECK_THAT(path.values[path.nearest_node(u)], WithinAbs(printed, 1e-6));

  const SolutionPath t1 = solve_tsrk(table1_model, 0.0016, 10.0, TsrkScheme::gamma_ode_m1);
  const std::vector<double> printed_survival{0.167, 0.352, 0.506, 0.623, 0.713, 0.782, 0.833, 0.873, 0.903, 0.926, 0.944};
  for (int u = 0; u <= 10; ++u) CHECK(std::round((1.0 - t1.at(u)) * 1000.0) / 1000.0 == Catch::Approx(printed_survival[u]).margin(1e-9));
}

TEST_CASE("published Pareto history-local values") {
  {
    const SolutionPath p = solve_tsrk(ModelParams(ClaimDistribution::pareto_lomax(1), 1.0), 0.01, 10.0, TsrkScheme::pareto_phl);
    CHECK_THAT(p.at(10.0), WithinAbs(0.102523, 3e-6));
  }
  {
    const SolutionPath p = solve_tsrk(ModelParams(ClaimDistribution::pareto_lomax(1), 0.1), 0.01, 100.0, TsrkScheme::pareto_phl);
    CHECK_THAT(p.at(100.0), WithinAbs(0.164792, 5e-5));
  }
}
