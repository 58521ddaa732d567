#include "ruinrk/exact.hpp"

#include <cmath>
#include <utility>

#include "ruinrk/errors.hpp"

namespace ruinrk {

namespace {

void check_u(double u) {
  if (!(u >= 0.0)) throw DomainError("exact solution needs u >= 0");
}

}  // namespace

double Gamma2ExactSolution::operator()(double u) const { return a1 * std::exp(s1 * u) + a2 * std::exp(s2 * u); }

double Gamma2ExactSolution::derivative(double u) const {
  return a1 * s1 * std::exp(s1 * u) + a2 * s2 * std::exp(s2 * u);
}

Gamma2ExactSolution gamma2_exact_solution(const ModelParams& model) {
  const auto* g = model.claims().get_if<Gamma2>();
  if (!g) throw ModelError("exact_gamma2 needs gamma2 claims");
  const double beta = g->beta;
  const double lc = lambda_over_c(model);
  const double b = 2.0 * beta - lc;
  const double c = beta * beta - 2.0 * beta * lc;
  const double disc = b * b - 4.0 * c;
  if (!(disc > 0.0)) throw Error("characteristic quadratic has no distinct real roots");
  const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
  double r1 = q;
  double r2 = c / q;
  if (std::abs(r1) > std::abs(r2)) std::swap(r1, r2);

  Gamma2ExactSolution sol;
  sol.s1 = r1;
  sol.s2 = r2;
  const double psi0 = psi_at_zero(model.theta());
  const double dpsi0 = lc * (psi0 - 1.0);
  // a1 + a2 = psi0, a1 s1 + a2 s2 = dpsi0
  sol.a1 = (dpsi0 - psi0 * r2) / (r1 - r2);
  sol.a2 = psi0 - sol.a1;
  return sol;
}

double exact_gamma2(const ModelParams& model, double u) {
  check_u(u);
  return gamma2_exact_solution(model)(u);
}

double exact_exponential(const ModelParams& model, double u) {
  const auto* e = model.claims().get_if<Exponential>();
  if (!e) throw ModelError("exact_exponential needs exponential claims");
  check_u(u);
  const double theta = model.theta();
  return std::exp(-theta * e->beta * u / (1.0 + theta)) / (1.0 + theta);
}

bool has_exact_solution(const ModelParams& model) {
  return model.claims().get_if<Gamma2>() != nullptr || model.claims().get_if<Exponential>() != nullptr;
}

double exact_ruin(const ModelParams& model, double u) {
  if (model.claims().get_if<Gamma2>()) return exact_gamma2(model, u);
  if (model.claims().get_if<Exponential>()) return exact_exponential(model, u);
  throw ModelError("no closed-form ruin probability for " + model.claims().spec());
}

}  // namespace ruinrk
