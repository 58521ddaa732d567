#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ruinrk/kernels.hpp"
#include "ruinrk/model.hpp"
#include "ruinrk/quadrature.hpp"
#include "ruinrk/tsrk_coefficients.hpp"

namespace ruinrk {

using Vec3 = std::array<double, 3>;

/// Y' = M Y + g(u), Y(0) = y0.
struct LinearOdeSystem {
  std::array<double, 9> m{};  // row-major
  std::function<Vec3(double)> forcing;
  Vec3 y0{};

  Vec3 apply(const Vec3& y) const;
  Vec3 rhs(double u, const Vec3& y) const;
};

/// (psi, K1, I) system for Erlang-2 claims with
/// K1(u) = \int_0^u psi(z) e^{-beta (u - z)} dz and I = beta^2 (t e^{-beta t} * psi).
LinearOdeSystem gamma2_ode_system(const ModelParams& model);

/// One classical RK4 step of size h from (u, y).
Vec3 rk4_ode_step(const LinearOdeSystem& system, double u, const Vec3& y, double h);

/// Two classical RK4 half steps combined with one full step,
/// (16 y_{h/2,h/2} - y_h)/15.
Vec3 rk4_ode_step_extrapolated(const LinearOdeSystem& system, double u, const Vec3& y, double h);

struct TsrkStepState {
  Vec3 y_prev{};  // Y_{n-1}
  Vec3 y_curr{};  // Y_n
  std::vector<Vec3> k_prev;  // k_i^{[n-1]}
  std::size_t n = 1;
};

struct TsrkOdeStep {
  Vec3 next{};
  std::vector<Vec3> k;  // k_i^{[n]}
  std::vector<Vec3> stages;  // Y_i^{[n]}
};

/// Y_1 by one RK4 step and k_i^{[0]} = M Y(c_i h) + g(c_i h) with Y(c_i h) from
/// RK4 steps of size c_i h. Extrapolated RK4 steps are used for methods of
/// order above 4.
TsrkStepState tsrk_ode_bootstrap(const TsrkCoefficients& coeffs, const LinearOdeSystem& system, double h);

/// Solves the 3m x 3m stage system and applies the two-step update.
/// Throws StepFailure when a pivot falls below 1e-14.
TsrkOdeStep tsrk_ode_step(const TsrkCoefficients& coeffs, const LinearOdeSystem& system, const TsrkStepState& state,
                          double h);

/// psi_1 and the stage derivative k^{[0]} at c h for the scalar schemes.
struct ScalarBootstrap {
  double psi1 = 0.0;
  double k0 = 0.0;
  double psi_c = 0.0;  // psi(c h) used for k^{[0]}
  std::array<double, 3> start_k{};  // RK4 stage slopes at 0, h/2, h
};

/// Result of one scalar TSRK step.
struct ScalarStep {
  double next = 0.0;
  double k = 0.0;        // k^{[n]}
  double stage = 0.0;    // Psi^{[n]}
  double history = 0.0;  // history part of the stage convolution
  double local = 0.0;    // local part (PHL) or the whole improper sum
  int iterations = 0;
};

/// Pareto history-local scheme: truncated Pareto Gauss rules on every history
/// panel (cached per lag index), cubic interpolation of the grid history and
/// the two-step stage interpolant on the current step.
class PhlScheme {
 public:
  PhlScheme(const ModelParams& model, const TsrkCoefficients& coeffs, double h, int q,
            ExecPolicy policy = ExecPolicy::parallel);

  ScalarBootstrap bootstrap() const;

  /// history = psi_0..psi_n with n >= 1; k_prev = k^{[n-1]}.
  ScalarStep step(std::span<const double> history, double k_prev);

  /// History integral at u_n + c h by the precombined lag stencils.
  double history_integral(std::span<const double> history);
  /// Same integral evaluated panel by panel with cubic_interpolate.
  double history_integral_direct(std::span<const double> history);
  /// Local integral over lags [0, c h] for given psi_{n-1}, psi_n, k's.
  double local_integral(double psi_prev, double psi_curr, double k_prev, double k_curr) const;

  const GaussRule& local_rule() const noexcept { return local_rule_; }
  LagRuleCache& cache() noexcept { return cache_; }
  int q() const noexcept { return q_; }

 private:
  void ensure_lags(std::size_t n);

  ModelParams model_;
  TsrkCoefficients coeffs_;
  double h_;
  int q_;
  ExecPolicy policy_;
  double lc_;
  LagRuleCache cache_;
  std::vector<std::array<double, 4>> stencils_;  // by lag index, entry 0 unused
  GaussRule local_rule_;
  std::vector<TwoStepInterpolant> local_interp_;
};

/// Single Gauss-Jacobi rule for convolution plus tail with psi_*(s) = 1 for s < 0.
class ImproperScheme {
 public:
  ImproperScheme(const ModelParams& model, const TsrkCoefficients& coeffs, double h, int q);

  ScalarBootstrap bootstrap() const;
  ScalarStep step(std::span<const double> history, double k_prev) const;

  /// sum_r W_r psi_*(u_n + c h - x_r) for the given current-step data.
  double improper_sum(std::span<const double> history, double k_prev, double k_curr) const;

  const GaussRule& rule() const noexcept { return rule_; }

 private:
  ModelParams model_;
  TsrkCoefficients coeffs_;
  double h_;
  double lc_;
  GaussRule rule_;
  std::vector<std::optional<TwoStepInterpolant>> local_interp_;  // set for nodes x_r < c h
};

/// The one-stage scheme with the 2-point Gauss-Legendre history and local
/// rules of the coefficient set; works for any claim law.
class LegendreHistoryScheme {
 public:
  LegendreHistoryScheme(const ModelParams& model, const TsrkCoefficients& coeffs, double h, std::size_t max_steps,
                        ExecPolicy policy = ExecPolicy::parallel);

  ScalarBootstrap bootstrap() const;
  /// history = psi_0..psi_n, ks = k^{[0]}..k^{[n-1]}.
  ScalarStep step(std::span<const double> history, std::span<const double> ks, const ScalarBootstrap& start);

 private:
  ModelParams model_;
  TsrkCoefficients coeffs_;
  double h_;
  ExecPolicy policy_;
  double lc_;
  std::array<std::vector<double>, 2> kernel_;  // p((L + c - xi_j) h), L = 0..max_steps
  std::array<std::vector<double>, 2> panel_;   // interpolated psi(u_nu + xi_j h) per panel
};

enum class TsrkScheme { gamma_ode_m1, gamma_ode_m2, pareto_phl, pareto_improper, legendre_history };

std::string to_string(TsrkScheme scheme);
TsrkScheme parse_tsrk_scheme(const std::string& name);

struct TsrkOptions {
  int q = 2;
  std::optional<TsrkCoefficients> m2_coefficients;
  ExecPolicy policy = ExecPolicy::parallel;
};

SolutionPath solve_tsrk(const ModelParams& model, double h, double u_max, TsrkScheme scheme,
                        const TsrkOptions& options = {});

/// Full Y path of the Erlang-2 ODE scheme (psi, K1, I at every node).
std::vector<Vec3> solve_tsrk_ode_states(const ModelParams& model, const TsrkCoefficients& coeffs, double h,
                                        double u_max);

}  // namespace ruinrk
