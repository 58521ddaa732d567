#include "ruinrk/rk4.hpp"

#include <cmath>

#include "ruinrk/errors.hpp"

namespace ruinrk {

KernelTables make_kernel_tables(const ClaimDistribution& claims, double h, std::size_t n_lags) {
  if (!(h > 0.0)) throw DomainError("step must be positive");
  KernelTables t;
  t.h = h;
  t.at_node.resize(n_lags + 1);
  t.at_half.resize(n_lags + 1);
  for (std::size_t k = 0; k <= n_lags; ++k) {
    const double lag = static_cast<double>(k) * h;
    t.at_node[k] = claims.density(lag);
    t.at_half[k] = claims.density(lag + 0.5 * h);
  }
  if (const auto* g = claims.get_if<Gamma2>()) {
    t.exp_kernel.resize(n_lags + 1);
    for (std::size_t k = 0; k <= n_lags; ++k) {
      t.exp_kernel[k] = g->beta * g->beta * std::exp(-g->beta * static_cast<double>(k) * h);
    }
  }
  return t;
}

namespace {

std::size_t current_index(std::span<const double> history) {
  if (history.empty()) throw DomainError("RK4 step needs at least psi_0");
  return history.size() - 1;
}

void require_tables(const KernelTables& tables, std::size_t n) {
  // H_n(h) reads p((n+1) h).
  if (tables.at_node.size() < n + 2) throw DomainError("kernel table too short for this step");
}

}  // namespace

Rk4StageSet rk4_stages_generic(const ModelParams& model, std::span<const double> history, const KernelTables& tables,
                               ExecPolicy policy) {
  const std::size_t n = current_index(history);
  require_tables(tables, n);
  const double h = tables.h;
  const double lc = lambda_over_c(model);
  const ClaimDistribution& claims = model.claims();
  const double un = static_cast<double>(n) * h;
  const double psi_n = history[n];

  const std::span<const double> node(tables.at_node);
  const double h0 = simpson_convolution(policy, history, node, h);
  const double h_half = simpson_convolution(policy, history, tables.at_half, h);
  const double h_full = simpson_convolution(policy, history, node.subspan(1), h);

  const double p0 = node[0];
  const double p_half = tables.at_half[0];
  const double p_full = node[1];

  Rk4StageSet s;
  s.y[0] = psi_n;
  s.conv[0] = h0;
  s.k[0] = lc * (psi_n - s.conv[0] - claims.tail(un));

  s.y[1] = psi_n + 0.5 * h * s.k[0];
  s.conv[1] = h_half + h / 4.0 * (psi_n * p_half + s.y[1] * p0);
  s.k[1] = lc * (s.y[1] - s.conv[1] - claims.tail(un + 0.5 * h));

  s.y[2] = psi_n + 0.5 * h * s.k[1];
  s.conv[2] = h_half + h / 4.0 * (psi_n * p_half + s.y[2] * p0);
  s.k[2] = lc * (s.y[2] - s.conv[2] - claims.tail(un + 0.5 * h));

  s.y[3] = psi_n + h * s.k[2];
  s.conv[3] = h_full + h / 6.0 * (psi_n * p_full + 4.0 * s.y[2] * p_half + s.y[3] * p0);
  s.k[3] = lc * (s.y[3] - s.conv[3] - claims.tail(un + h));

  s.next = psi_n + h / 6.0 * (s.k[0] + 2.0 * s.k[1] + 2.0 * s.k[2] + s.k[3]);
  return s;
}

double rk4_step_generic(const ModelParams& model, std::span<const double> history, double h) {
  const std::size_t n = current_index(history);
  return rk4_stages_generic(model, history, make_kernel_tables(model.claims(), h, n + 1)).next;
}

GammaHistoryState gamma_history_state(const ModelParams& model, std::span<const double> history,
                                      const KernelTables& tables, ExecPolicy policy) {
  if (!model.claims().get_if<Gamma2>()) throw ModelError("gamma history state needs gamma2 claims");
  const std::size_t n = current_index(history);
  if (tables.exp_kernel.size() < n + 1 || tables.at_node.size() < n + 1) {
    throw DomainError("kernel table too short for this step");
  }
  return {simpson_convolution(policy, history, tables.at_node, tables.h),
          simpson_convolution(policy, history, tables.exp_kernel, tables.h)};
}

Rk4StageSet rk4_stages_gamma2(const ModelParams& model, std::span<const double> history, const GammaHistoryState& state,
                              double h) {
  const auto* g = model.claims().get_if<Gamma2>();
  if (!g) throw ModelError("rk4_step_gamma2 needs gamma2 claims");
  const std::size_t n = current_index(history);
  const double beta = g->beta;
  const double lc = lambda_over_c(model);
  const double un = static_cast<double>(n) * h;
  const double psi_n = history[n];
  auto gamma_tail = [beta](double u) { return std::exp(-beta * u) * (1.0 + beta * u); };
  const double e_half = std::exp(-beta * h / 2.0);
  const double e_full = std::exp(-beta * h);

  Rk4StageSet s;
  s.y[0] = psi_n;
  s.conv[0] = state.i_n;
  s.k[0] = lc * (psi_n - state.i_n - gamma_tail(un));

  s.y[1] = psi_n + h / 2.0 * s.k[0];
  s.conv[1] = e_half * (state.i_n + h / 2.0 * state.j_n) + beta * beta * h * h / 8.0 * psi_n * e_half;
  s.k[1] = lc * (s.y[1] - s.conv[1] - gamma_tail(un + h / 2.0));

  s.y[2] = psi_n + h / 2.0 * s.k[1];
  s.conv[2] = e_half * (state.i_n + h / 2.0 * state.j_n) + beta * beta * h * h / 8.0 * psi_n * e_half;
  s.k[2] = lc * (s.y[2] - s.conv[2] - gamma_tail(un + h / 2.0));

  s.y[3] = psi_n + h * s.k[2];
  s.conv[3] = e_full * (state.i_n + h * state.j_n) +
              h / 6.0 * (psi_n * beta * beta * h * e_full + 4.0 * s.y[2] * beta * beta * (h / 2.0) * e_half);
  s.k[3] = lc * (s.y[3] - s.conv[3] - gamma_tail(un + h));

  s.next = psi_n + h / 6.0 * (s.k[0] + 2.0 * s.k[1] + 2.0 * s.k[2] + s.k[3]);
  return s;
}

double rk4_step_gamma2(const ModelParams& model, std::span<const double> history, const GammaHistoryState& state,
                       double h) {
  return rk4_stages_gamma2(model, history, state, h).next;
}

Rk4StageSet rk4_stages_pareto(const ModelParams& model, std::span<const double> history, const KernelTables& tables,
                              ExecPolicy policy) {
  if (!model.claims().get_if<ParetoLomax>()) throw ModelError("rk4_step_pareto needs pareto claims");
  return rk4_stages_generic(model, history, tables, policy);
}

double rk4_step_pareto(const ModelParams& model, std::span<const double> history, double h) {
  const std::size_t n = current_index(history);
  return rk4_stages_pareto(model, history, make_kernel_tables(model.claims(), h, n + 1)).next;
}

std::size_t grid_steps(double h, double u_max) {
  if (!(h > 0.0) || !std::isfinite(h)) throw DomainError("step h must be positive and finite");
  if (!(u_max >= 0.0) || !std::isfinite(u_max)) throw DomainError("u_max must be non-negative and finite");
  const double ratio = u_max / h;
  const double nearest = std::round(ratio);
  if (std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, nearest)) return static_cast<std::size_t>(nearest);
  return static_cast<std::size_t>(std::floor(ratio));
}

SolutionPath solve_rk4(const ModelParams& model, double h, double u_max, ExecPolicy policy) {
  const std::size_t steps = grid_steps(h, u_max);
  SolutionPath path{h, {}, "rk4-s13", model, {}};
  path.values.reserve(steps + 1);
  path.values.push_back(psi_at_zero(model.theta()));
  path.metadata["history_rule"] = "simpson13";
  path.metadata["kernel_policy"] = to_string(policy);

  const ClaimDistribution& claims = model.claims();
  const KernelTables tables = make_kernel_tables(claims, h, steps + 1);
  const bool gamma = claims.get_if<Gamma2>() != nullptr;
  path.metadata["stage_formulas"] = gamma ? "gamma2-shift" : (claims.get_if<ParetoLomax>() ? "pareto" : "generic");

  for (std::size_t n = 0; n < steps; ++n) {
    const std::span<const double> history(path.values);
    double next = 0.0;
    if (gamma) {
      next = rk4_step_gamma2(model, history, gamma_history_state(model, history, tables, policy), h);
    } else if (claims.get_if<ParetoLomax>()) {
      next = rk4_stages_pareto(model, history, tables, policy).next;
    } else {
      next = rk4_stages_generic(model, history, tables, policy).next;
    }
    if (!std::isfinite(next)) throw DivergedError("RK4 produced a non-finite value", n + 1);
    path.values.push_back(next);
  }
  return path;
}

}  // namespace ruinrk
