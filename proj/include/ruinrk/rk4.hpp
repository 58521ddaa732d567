#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "ruinrk/kernels.hpp"
#include "ruinrk/model.hpp"

namespace ruinrk {

/// Stage data of one classical RK4 step for the ruin equation.
struct Rk4StageSet {
  std::array<double, 4> k{};     // stage derivatives k1..k4
  std::array<double, 4> y{};     // stage values; y[0] = psi_n, y[1..3] = Y2..Y4
  std::array<double, 4> conv{};  // stage convolutions I1..I4
  double next = 0.0;             // psi_{n+1}
};

/// History integrals for Erlang-2 claims at u_n:
/// i_n ~ \int_0^{u_n} psi(z) p(u_n - z) dz,
/// j_n ~ \int_0^{u_n} psi(z) beta^2 e^{-beta (u_n - z)} dz.
struct GammaHistoryState {
  double i_n = 0.0;
  double j_n = 0.0;
};

/// Claim-kernel values on the lag grid used by the Simpson history sums.
struct KernelTables {
  double h = 0.0;
  std::vector<double> at_node;  // p(k h), k = 0..n_lags
  std::vector<double> at_half;  // p(k h + h/2)
  std::vector<double> exp_kernel;  // beta^2 e^{-beta k h}, Erlang-2 only
};

KernelTables make_kernel_tables(const ClaimDistribution& claims, double h, std::size_t n_lags);

/// One RK4 step from psi_n (history = psi_0..psi_n) with Simpson 1/3 history
/// integrals H_n(0), H_n(h/2), H_n(h) and the local stage corrections.
Rk4StageSet rk4_stages_generic(const ModelParams& model, std::span<const double> history, const KernelTables& tables,
                               ExecPolicy policy = ExecPolicy::serial);
double rk4_step_generic(const ModelParams& model, std::span<const double> history, double h);

/// I_n = S[g_n], J_n = S[q_n] by Simpson 1/3 over the history.
GammaHistoryState gamma_history_state(const ModelParams& model, std::span<const double> history,
                                      const KernelTables& tables, ExecPolicy policy = ExecPolicy::serial);

/// Erlang-2 step via the shift identity H_n(delta) = e^{-beta delta}(I_n + delta J_n).
Rk4StageSet rk4_stages_gamma2(const ModelParams& model, std::span<const double> history, const GammaHistoryState& state,
                              double h);
double rk4_step_gamma2(const ModelParams& model, std::span<const double> history, const GammaHistoryState& state,
                       double h);

/// Pareto-Lomax step: the generic stages with the Pareto tail and density.
Rk4StageSet rk4_stages_pareto(const ModelParams& model, std::span<const double> history, const KernelTables& tables,
                              ExecPolicy policy = ExecPolicy::serial);
double rk4_step_pareto(const ModelParams& model, std::span<const double> history, double h);

/// Number of uniform steps of size h covering [0, u_max].
std::size_t grid_steps(double h, double u_max);

/// Full RK4-S1/3 solve on [0, u_max]; dispatches to the Erlang-2 or Pareto
/// specialisation when the claim law allows it.
SolutionPath solve_rk4(const ModelParams& model, double h, double u_max, ExecPolicy policy = ExecPolicy::parallel);

}  // namespace ruinrk
