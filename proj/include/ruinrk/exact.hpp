#pragma once

#include "ruinrk/model.hpp"

namespace ruinrk {

/// psi(u) = a1 e^{s1 u} + a2 e^{s2 u} for Erlang-2 claims.
struct Gamma2ExactSolution {
  double s1 = 0.0;  // the root closer to zero
  double s2 = 0.0;
  double a1 = 0.0;
  double a2 = 0.0;

  double operator()(double u) const;
  double derivative(double u) const;
};

/// Roots of s^2 + (2 beta - lambda/c) s + beta^2 - 2 beta lambda/c = 0 and the
/// amplitudes fixed by psi(0) = 1/(1+theta), psi'(0) = (lambda/c)(psi(0) - 1).
Gamma2ExactSolution gamma2_exact_solution(const ModelParams& model);

double exact_gamma2(const ModelParams& model, double u);

/// psi(u) = e^{-theta beta u / (1+theta)} / (1+theta).
double exact_exponential(const ModelParams& model, double u);

/// Dispatches to the closed form for the model's claim law; throws ModelError
/// when none exists.
double exact_ruin(const ModelParams& model, double u);
bool has_exact_solution(const ModelParams& model);

}  // namespace ruinrk
