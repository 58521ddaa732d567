#include "ruinrk/tsrk.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ruinrk/errors.hpp"
#include "ruinrk/interpolation.hpp"
#include "ruinrk/linalg.hpp"
#include "ruinrk/rk4.hpp"

namespace ruinrk {

namespace {

constexpr double kFixedPointTol = 1e-13;
constexpr int kFixedPointMaxIter = 50;
constexpr double kPivotTol = 1e-14;

Vec3 axpy(const Vec3& y, double a, const Vec3& x) { return {y[0] + a * x[0], y[1] + a * x[1], y[2] + a * x[2]}; }

std::string format_double(double x) {
  std::ostringstream out;
  out.precision(17);
  out << x;
  return out.str();
}

const ParetoLomax& require_pareto(const ModelParams& model, const char* who) {
  const auto* p = model.claims().get_if<ParetoLomax>();
  if (!p) throw ModelError(std::string(who) + " needs pareto claims, got " + model.claims().spec());
  return *p;
}

void require_one_stage(const TsrkCoefficients& coeffs) {
  if (coeffs.stages != 1) throw ConfigError("scalar two-step schemes need a one-stage coefficient set");
}

// psi on [0, c h] for the first stage: the quadratic through psi_0 with slope
// psi'(0) = (lambda/c)(psi_0 - 1) and the RK4 value psi(c h).
struct StartData {
  ScalarBootstrap boot;
  double psi0 = 0.0;
  double slope0 = 0.0;
  double curv = 0.0;

  double quadratic(double z) const { return psi0 + slope0 * z + curv * z * z; }
};

StartData start_data(const ModelParams& model, double c, double h) {
  StartData d;
  d.psi0 = psi_at_zero(model.theta());
  d.slope0 = lambda_over_c(model) * (d.psi0 - 1.0);
  const std::vector<double> first{d.psi0};
  const Rk4StageSet full = rk4_stages_generic(model, first, make_kernel_tables(model.claims(), h, 1));
  d.boot.psi1 = full.next;
  d.boot.start_k = {full.k[0], full.k[2], full.k[3]};
  const double ch = c * h;
  d.boot.psi_c = rk4_stages_generic(model, first, make_kernel_tables(model.claims(), ch, 1)).next;
  d.curv = (d.boot.psi_c - d.psi0 - d.slope0 * ch) / (ch * ch);
  return d;
}

// Fixed-point solve of k = stage_map(k) starting from `guess`.
template <class Map>
double fixed_point(Map stage_map, double guess, std::size_t n, int& iterations) {
  double k = guess;
  for (int it = 1; it <= kFixedPointMaxIter; ++it) {
    const double next = stage_map(k);
    if (!std::isfinite(next)) throw DivergedError("stage iteration produced a non-finite value", n);
    if (std::abs(next - k) <= kFixedPointTol * std::max(1.0, std::abs(next))) {
      iterations = it;
      return next;
    }
    k = next;
  }
  throw StepFailure("implicit stage did not converge in 50 iterations", n);
}

}  // namespace

Vec3 LinearOdeSystem::apply(const Vec3& y) const {
  Vec3 out{};
  for (std::size_t r = 0; r < 3; ++r) out[r] = m[r * 3] * y[0] + m[r * 3 + 1] * y[1] + m[r * 3 + 2] * y[2];
  return out;
}

Vec3 LinearOdeSystem::rhs(double u, const Vec3& y) const {
  Vec3 out = apply(y);
  if (forcing) {
    const Vec3 g = forcing(u);
    for (std::size_t r = 0; r < 3; ++r) out[r] += g[r];
  }
  return out;
}

LinearOdeSystem gamma2_ode_system(const ModelParams& model) {
  const auto* g = model.claims().get_if<Gamma2>();
  if (!g) throw ModelError("the ODE form needs gamma2 claims, got " + model.claims().spec());
  const double beta = g->beta;
  const double lc = lambda_over_c(model);
  LinearOdeSystem sys;
  sys.m = {lc, 0.0, -lc, 1.0, -beta, 0.0, 0.0, beta * beta, -beta};
  sys.forcing = [lc, beta](double u) -> Vec3 { return {-lc * std::exp(-beta * u) * (1.0 + beta * u), 0.0, 0.0}; };
  sys.y0 = {psi_at_zero(model.theta()), 0.0, 0.0};
  return sys;
}

Vec3 rk4_ode_step(const LinearOdeSystem& system, double u, const Vec3& y, double h) {
  const Vec3 k1 = system.rhs(u, y);
  const Vec3 k2 = system.rhs(u + h / 2.0, axpy(y, h / 2.0, k1));
  const Vec3 k3 = system.rhs(u + h / 2.0, axpy(y, h / 2.0, k2));
  const Vec3 k4 = system.rhs(u + h, axpy(y, h, k3));
  Vec3 out{};
  for (std::size_t r = 0; r < 3; ++r) out[r] = y[r] + h / 6.0 * (k1[r] + 2.0 * k2[r] + 2.0 * k3[r] + k4[r]);
  return out;
}

Vec3 rk4_ode_step_extrapolated(const LinearOdeSystem& system, double u, const Vec3& y, double h) {
  const Vec3 coarse = rk4_ode_step(system, u, y, h);
  const Vec3 fine = rk4_ode_step(system, u + h / 2.0, rk4_ode_step(system, u, y, h / 2.0), h / 2.0);
  Vec3 out{};
  for (std::size_t r = 0; r < 3; ++r) out[r] = (16.0 * fine[r] - coarse[r]) / 15.0;
  return out;
}

TsrkStepState tsrk_ode_bootstrap(const TsrkCoefficients& coeffs, const LinearOdeSystem& system, double h) {
  if (!(h > 0.0)) throw DomainError("step must be positive");
  const bool high_order = coeffs.order > 4;
  auto advance = [&](double step) {
    return high_order ? rk4_ode_step_extrapolated(system, 0.0, system.y0, step)
                      : rk4_ode_step(system, 0.0, system.y0, step);
  };
  TsrkStepState state;
  state.y_prev = system.y0;
  state.y_curr = advance(h);
  state.n = 1;
  for (std::size_t i = 0; i < static_cast<std::size_t>(coeffs.stages); ++i) {
    const double ci = coeffs.c[i] * h;
    state.k_prev.push_back(system.rhs(ci, advance(ci)));
  }
  return state;
}

TsrkOdeStep tsrk_ode_step(const TsrkCoefficients& coeffs, const LinearOdeSystem& system, const TsrkStepState& state,
                          double h) {
  const auto s = static_cast<std::size_t>(coeffs.stages);
  if (s < 1 || s > 2) throw ConfigError("ODE stepper supports one or two stages");
  if (state.k_prev.size() != s) throw DomainError("step state has the wrong number of stage derivatives");
  const std::size_t dim = 3 * s;
  const double un = static_cast<double>(state.n) * h;

  std::vector<Vec3> g(s);
  for (std::size_t j = 0; j < s; ++j) {
    g[j] = system.forcing ? system.forcing(un + coeffs.c[j] * h) : Vec3{};
  }

  std::vector<double> a(dim * dim, 0.0);
  std::vector<double> rhs(dim, 0.0);
  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t j = 0; j < s; ++j) {
      const double hb = h * coeffs.b_at(i, j);
      for (std::size_t r = 0; r < 3; ++r) {
        for (std::size_t col = 0; col < 3; ++col) {
          const double identity = (i == j && r == col) ? 1.0 : 0.0;
          a[(3 * i + r) * dim + 3 * j + col] = identity - hb * system.m[r * 3 + col];
        }
      }
    }
    for (std::size_t r = 0; r < 3; ++r) {
      double v = coeffs.delta1[i] * state.y_curr[r] + coeffs.delta2[i] * state.y_prev[r];
      for (std::size_t j = 0; j < s; ++j) {
        v += h * coeffs.a_at(i, j) * state.k_prev[j][r] + h * coeffs.b_at(i, j) * g[j][r];
      }
      rhs[3 * i + r] = v;
    }
  }
  if (!solve_dense(a, rhs, dim, kPivotTol)) {
    throw StepFailure("singular stage matrix at h = " + format_double(h), state.n);
  }

  TsrkOdeStep out;
  out.stages.resize(s);
  out.k.resize(s);
  for (std::size_t i = 0; i < s; ++i) {
    out.stages[i] = {rhs[3 * i], rhs[3 * i + 1], rhs[3 * i + 2]};
    const Vec3 my = system.apply(out.stages[i]);
    for (std::size_t r = 0; r < 3; ++r) out.k[i][r] = my[r] + g[i][r];
  }
  for (std::size_t r = 0; r < 3; ++r) {
    double v = coeffs.theta1 * state.y_curr[r] + coeffs.theta2 * state.y_prev[r];
    for (std::size_t i = 0; i < s; ++i) v += h * coeffs.v[i] * state.k_prev[i][r] + h * coeffs.w[i] * out.k[i][r];
    out.next[r] = v;
  }
  return out;
}

// ---------------------------------------------------------------------------

PhlScheme::PhlScheme(const ModelParams& model, const TsrkCoefficients& coeffs, double h, int q, ExecPolicy policy)
    : model_(model),
      coeffs_(coeffs),
      h_(h),
      q_(q),
      policy_(policy),
      lc_(lambda_over_c(model)),
      cache_(require_pareto(model, "pareto-phl").m, q, coeffs.c.at(0), h) {
  require_one_stage(coeffs);
  const double c = coeffs_.c[0];
  local_rule_ = pareto_truncated_gauss(0.0, c * h, cache_.m(), q);
  for (double x : local_rule_.nodes) local_interp_.push_back(two_step_interpolant(c - x / h, c));
  stencils_.resize(1);
}

ScalarBootstrap PhlScheme::bootstrap() const {
  const double c = coeffs_.c[0];
  const double ch = c * h_;
  StartData d = start_data(model_, c, h_);
  double local = 0.0;
  for (std::size_t r = 0; r < local_rule_.size(); ++r) {
    local += local_rule_.weights[r] * d.quadratic(ch - local_rule_.nodes[r]);
  }
  d.boot.k0 = lc_ * (d.boot.psi_c - local - model_.claims().tail(ch));
  return d.boot;
}

void PhlScheme::ensure_lags(std::size_t n) {
  const double c = coeffs_.c[0];
  while (stencils_.size() <= n) {
    const std::size_t j = stencils_.size();
    const GaussRule& rule = cache_.get(j);
    std::array<double, 4> s{};
    for (std::size_t r = 0; r < rule.size(); ++r) {
      // Offset of the node from grid index n - j, in units of h.
      const double offset = static_cast<double>(j) + c - rule.nodes[r] / h_;
      const auto lw = lagrange_weights(offset, -1.0, 4);
      for (std::size_t i = 0; i < 4; ++i) s[i] += rule.weights[r] * lw[i];
    }
    stencils_.push_back(s);
  }
}

double PhlScheme::history_integral_direct(std::span<const double> history) {
  const std::size_t n = history.size() - 1;
  const double un = static_cast<double>(n) * h_;
  const double s = un + coeffs_.c[0] * h_;
  double total = 0.0;
  for (std::size_t j = 1; j <= n; ++j) {
    const GaussRule& rule = cache_.get(j);
    for (std::size_t r = 0; r < rule.size(); ++r) {
      const double z = std::clamp(s - rule.nodes[r], 0.0, un);
      total += rule.weights[r] * cubic_interpolate(history, h_, z);
    }
  }
  return total;
}

double PhlScheme::history_integral(std::span<const double> history) {
  if (history.size() < 2) throw DomainError("history integral needs n >= 1");
  const std::size_t n = history.size() - 1;
  if (n < 4) return history_integral_direct(history);
  ensure_lags(n);

  const double un = static_cast<double>(n) * h_;
  const double s = un + coeffs_.c[0] * h_;
  auto panel = [&](std::size_t j) {
    const GaussRule& rule = cache_.get(j);
    double sum = 0.0;
    for (std::size_t r = 0; r < rule.size(); ++r) {
      sum += rule.weights[r] * cubic_interpolate(history, h_, std::clamp(s - rule.nodes[r], 0.0, un));
    }
    return sum;
  };
  return panel(1) + lag_stencil_sum(policy_, history, stencils_, n, 2, n - 1) + panel(n);
}

double PhlScheme::local_integral(double psi_prev, double psi_curr, double k_prev, double k_curr) const {
  double sum = 0.0;
  for (std::size_t r = 0; r < local_rule_.size(); ++r) {
    const TwoStepInterpolant& p = local_interp_[r];
    sum += local_rule_.weights[r] *
           (p.eta1 * psi_curr + p.eta2 * psi_prev + h_ * p.alpha * k_prev + h_ * p.beta * k_curr);
  }
  return sum;
}

ScalarStep PhlScheme::step(std::span<const double> history, double k_prev) {
  if (history.size() < 2) throw DomainError("two-step update needs psi_0 and psi_1");
  const std::size_t n = history.size() - 1;
  const double c = coeffs_.c[0];
  const double s = (static_cast<double>(n) + c) * h_;
  const double psi_n = history[n];
  const double psi_p = history[n - 1];

  ScalarStep out;
  out.history = history_integral(history);
  const double tail_s = model_.claims().tail(s);
  const double base = coeffs_.delta1[0] * psi_n + coeffs_.delta2[0] * psi_p + h_ * coeffs_.a[0] * k_prev;
  auto stage_map = [&](double k) {
    const double stage = base + h_ * coeffs_.b[0] * k;
    return lc_ * (stage - out.history - local_integral(psi_p, psi_n, k_prev, k) - tail_s);
  };
  out.k = fixed_point(stage_map, k_prev, n, out.iterations);
  out.stage = base + h_ * coeffs_.b[0] * out.k;
  out.local = local_integral(psi_p, psi_n, k_prev, out.k);
  out.next = coeffs_.theta1 * psi_n + coeffs_.theta2 * psi_p + h_ * coeffs_.v[0] * k_prev + h_ * coeffs_.w[0] * out.k;
  return out;
}

// ---------------------------------------------------------------------------

ImproperScheme::ImproperScheme(const ModelParams& model, const TsrkCoefficients& coeffs, double h, int q)
    : model_(model),
      coeffs_(coeffs),
      h_(h),
      lc_(lambda_over_c(model)),
      rule_(gauss_jacobi_improper(require_pareto(model, "pareto-improper").m, q)) {
  require_one_stage(coeffs);
  const double c = coeffs_.c[0];
  for (double x : rule_.nodes) {
    if (x < c * h) {
      local_interp_.emplace_back(two_step_interpolant(c - x / h, c));
    } else {
      local_interp_.emplace_back(std::nullopt);
    }
  }
}

ScalarBootstrap ImproperScheme::bootstrap() const {
  const double c = coeffs_.c[0];
  const double ch = c * h_;
  StartData d = start_data(model_, c, h_);
  double sum = 0.0;
  for (std::size_t r = 0; r < rule_.size(); ++r) {
    const double z = ch - rule_.nodes[r];
    sum += rule_.weights[r] * (z < 0.0 ? 1.0 : d.quadratic(z));
  }
  d.boot.k0 = lc_ * (d.boot.psi_c - sum);
  return d.boot;
}

double ImproperScheme::improper_sum(std::span<const double> history, double k_prev, double k_curr) const {
  const std::size_t n = history.size() - 1;
  const double un = static_cast<double>(n) * h_;
  const double s = un + coeffs_.c[0] * h_;
  double sum = 0.0;
  for (std::size_t r = 0; r < rule_.size(); ++r) {
    const double z = s - rule_.nodes[r];
    double value = 1.0;
    if (local_interp_[r]) {
      const TwoStepInterpolant& p = *local_interp_[r];
      value = p.eta1 * history[n] + p.eta2 * history[n - 1] + h_ * p.alpha * k_prev + h_ * p.beta * k_curr;
    } else if (z >= 0.0) {
      value = cubic_interpolate(history, h_, std::min(z, un));
    }
    sum += rule_.weights[r] * value;
  }
  return sum;
}

ScalarStep ImproperScheme::step(std::span<const double> history, double k_prev) const {
  if (history.size() < 2) throw DomainError("two-step update needs psi_0 and psi_1");
  const std::size_t n = history.size() - 1;
  const double psi_n = history[n];
  const double psi_p = history[n - 1];
  const double base = coeffs_.delta1[0] * psi_n + coeffs_.delta2[0] * psi_p + h_ * coeffs_.a[0] * k_prev;

  ScalarStep out;
  auto stage_map = [&](double k) { return lc_ * (base + h_ * coeffs_.b[0] * k - improper_sum(history, k_prev, k)); };
  out.k = fixed_point(stage_map, k_prev, n, out.iterations);
  out.stage = base + h_ * coeffs_.b[0] * out.k;
  out.local = improper_sum(history, k_prev, out.k);
  out.next = coeffs_.theta1 * psi_n + coeffs_.theta2 * psi_p + h_ * coeffs_.v[0] * k_prev + h_ * coeffs_.w[0] * out.k;
  return out;
}

// ---------------------------------------------------------------------------

LegendreHistoryScheme::LegendreHistoryScheme(const ModelParams& model, const TsrkCoefficients& coeffs, double h,
                                             std::size_t max_steps, ExecPolicy policy)
    : model_(model), coeffs_(coeffs), h_(h), policy_(policy), lc_(lambda_over_c(model)) {
  require_one_stage(coeffs);
  if (!coeffs.has_quadrature_data() || coeffs.xi.size() != 2) {
    throw ConfigError("Legendre-history scheme needs the derived quadrature coefficients");
  }
  const double c = coeffs_.c[0];
  for (std::size_t j = 0; j < 2; ++j) {
    kernel_[j].resize(max_steps + 2);
    // Lag 0 never enters the history sum.
    for (std::size_t lag = 1; lag < kernel_[j].size(); ++lag) {
      kernel_[j][lag] = model.claims().density((static_cast<double>(lag) + c - coeffs_.xi[j]) * h);
    }
  }
}

ScalarBootstrap LegendreHistoryScheme::bootstrap() const {
  const double c = coeffs_.c[0];
  const double ch = c * h_;
  StartData d = start_data(model_, c, h_);
  double local = 0.0;
  for (std::size_t j = 0; j < 2; ++j) {
    const double lag = (c - coeffs_.d_local[j]) * h_;
    local += h_ * coeffs_.w_local[j] * model_.claims().density(lag) * d.quadratic(ch - lag);
  }
  d.boot.k0 = lc_ * (d.boot.psi_c - local - model_.claims().tail(ch));
  return d.boot;
}

ScalarStep LegendreHistoryScheme::step(std::span<const double> history, std::span<const double> ks,
                                       const ScalarBootstrap& start) {
  if (history.size() < 2) throw DomainError("two-step update needs psi_0 and psi_1");
  const std::size_t n = history.size() - 1;
  if (ks.size() != n) throw DomainError("stage derivative history must hold k^[0]..k^[n-1]");
  if (kernel_[0].size() < n + 1) throw DomainError("step index exceeds the kernel table");
  const double c = coeffs_.c[0];

  for (std::size_t j = 0; j < 2; ++j) {
    auto& panel = panel_[j];
    while (panel.size() < n) {
      const std::size_t nu = panel.size();
      if (nu == 0) {
        double v = history[0];
        for (std::size_t l = 0; l < 3; ++l) v += h_ * coeffs_.start_gamma[j][l] * start.start_k[l];
        panel.push_back(v);
      } else {
        panel.push_back(coeffs_.zeta1[j] * history[nu] + coeffs_.zeta2[j] * history[nu - 1] +
                        h_ * coeffs_.rho[j] * ks[nu - 1] + h_ * coeffs_.gamma[j] * ks[nu]);
      }
    }
  }

  ScalarStep out;
  for (std::size_t j = 0; j < 2; ++j) {
    out.history += h_ * coeffs_.omega[j] *
                   lag_convolution(policy_, std::span<const double>(panel_[j]).first(n), kernel_[j]);
  }

  const double psi_n = history[n];
  const double psi_p = history[n - 1];
  const double k_prev = ks[n - 1];
  const double tail_s = model_.claims().tail((static_cast<double>(n) + c) * h_);
  std::array<double, 2> local_weight{};
  for (std::size_t j = 0; j < 2; ++j) {
    local_weight[j] = h_ * coeffs_.w_local[j] * model_.claims().density((c - coeffs_.d_local[j]) * h_);
  }
  auto local_part = [&](double k) {
    double sum = 0.0;
    for (std::size_t j = 0; j < 2; ++j) {
      sum += local_weight[j] * (coeffs_.eta1[j] * psi_n + coeffs_.eta2[j] * psi_p + h_ * coeffs_.alpha[j] * k_prev +
                                h_ * coeffs_.beta[j] * k);
    }
    return sum;
  };
  const double base = coeffs_.delta1[0] * psi_n + coeffs_.delta2[0] * psi_p + h_ * coeffs_.a[0] * k_prev;
  auto stage_map = [&](double k) {
    return lc_ * (base + h_ * coeffs_.b[0] * k - out.history - local_part(k) - tail_s);
  };
  out.k = fixed_point(stage_map, k_prev, n, out.iterations);
  out.stage = base + h_ * coeffs_.b[0] * out.k;
  out.local = local_part(out.k);
  out.next = coeffs_.theta1 * psi_n + coeffs_.theta2 * psi_p + h_ * coeffs_.v[0] * k_prev + h_ * coeffs_.w[0] * out.k;
  return out;
}

// ---------------------------------------------------------------------------

std::string to_string(TsrkScheme scheme) {
  switch (scheme) {
    case TsrkScheme::gamma_ode_m1: return "gamma-ode-m1";
    case TsrkScheme::gamma_ode_m2: return "gamma-ode-m2";
    case TsrkScheme::pareto_phl: return "pareto-phl";
    case TsrkScheme::pareto_improper: return "pareto-improper";
    case TsrkScheme::legendre_history: return "legendre-history";
  }
  return "unknown";
}

TsrkScheme parse_tsrk_scheme(const std::string& name) {
  for (TsrkScheme s : {TsrkScheme::gamma_ode_m1, TsrkScheme::gamma_ode_m2, TsrkScheme::pareto_phl,
                       TsrkScheme::pareto_improper, TsrkScheme::legendre_history}) {
    if (to_string(s) == name) return s;
  }
  throw ConfigError("unknown TSRK scheme '" + name + "'");
}

namespace {

void add_coefficient_metadata(SolutionPath& path, const TsrkCoefficients& k) {
  path.metadata["order"] = std::to_string(k.order);
  path.metadata["stages"] = std::to_string(k.stages);
  for (std::size_t i = 0; i < k.c.size(); ++i) path.metadata["c" + std::to_string(i + 1)] = format_double(k.c[i]);
  path.metadata["theta1"] = format_double(k.theta1);
  path.metadata["theta2"] = format_double(k.theta2);
  path.metadata["root_selection"] = k.root_selection;
}

void push_checked(SolutionPath& path, double value, std::size_t n) {
  if (!std::isfinite(value)) throw DivergedError("TSRK produced a non-finite value", n);
  path.values.push_back(value);
}

const TsrkCoefficients& ode_coefficients(TsrkScheme scheme, const TsrkOptions& options) {
  if (scheme == TsrkScheme::gamma_ode_m1) return derive_tsrk4_coefficients();
  if (!options.m2_coefficients) throw ConfigError("gamma-ode-m2 needs a two-stage coefficient file");
  if (options.m2_coefficients->stages != 2) throw ConfigError("gamma-ode-m2 needs a two-stage coefficient set");
  return *options.m2_coefficients;
}

}  // namespace

std::vector<Vec3> solve_tsrk_ode_states(const ModelParams& model, const TsrkCoefficients& coeffs, double h,
                                        double u_max) {
  const std::size_t steps = grid_steps(h, u_max);
  if (steps < 2) throw DomainError("two-step method needs u_max >= 2h");
  const LinearOdeSystem sys = gamma2_ode_system(model);
  TsrkStepState state = tsrk_ode_bootstrap(coeffs, sys, h);
  std::vector<Vec3> ys{state.y_prev, state.y_curr};
  ys.reserve(steps + 1);
  for (std::size_t n = 1; n < steps; ++n) {
    state.n = n;
    TsrkOdeStep step = tsrk_ode_step(coeffs, sys, state, h);
    for (double x : step.next) {
      if (!std::isfinite(x)) throw DivergedError("TSRK produced a non-finite value", n + 1);
    }
    state.y_prev = state.y_curr;
    state.y_curr = step.next;
    state.k_prev = std::move(step.k);
    ys.push_back(state.y_curr);
  }
  return ys;
}

SolutionPath solve_tsrk(const ModelParams& model, double h, double u_max, TsrkScheme scheme,
                        const TsrkOptions& options) {
  const std::size_t steps = grid_steps(h, u_max);
  if (steps < 2) throw DomainError("two-step method needs u_max >= 2h");
  SolutionPath path{h, {}, to_string(scheme), model, {}};
  path.values.reserve(steps + 1);

  switch (scheme) {
    case TsrkScheme::gamma_ode_m1:
    case TsrkScheme::gamma_ode_m2: {
      const TsrkCoefficients& k = ode_coefficients(scheme, options);
      for (const Vec3& y : solve_tsrk_ode_states(model, k, h, u_max)) path.values.push_back(y[0]);
      add_coefficient_metadata(path, k);
      return path;
    }
    case TsrkScheme::pareto_phl: {
      const TsrkCoefficients& k = derive_tsrk4_coefficients();
      PhlScheme phl(model, k, h, options.q, options.policy);
      const ScalarBootstrap boot = phl.bootstrap();
      path.values = {psi_at_zero(model.theta()), boot.psi1};
      double k_prev = boot.k0;
      for (std::size_t n = 1; n < steps; ++n) {
        const ScalarStep st = phl.step(path.values, k_prev);
        push_checked(path, st.next, n + 1);
        k_prev = st.k;
      }
      add_coefficient_metadata(path, k);
      path.metadata["q"] = std::to_string(options.q);
      path.metadata["kernel_policy"] = to_string(options.policy);
      path.metadata["rule_cache_size"] = std::to_string(phl.cache().size());
      path.metadata["rule_cache_hits"] = std::to_string(phl.cache().hits());
      path.metadata["rule_cache_misses"] = std::to_string(phl.cache().misses());
      return path;
    }
    case TsrkScheme::pareto_improper: {
      const TsrkCoefficients& k = derive_tsrk4_coefficients();
      ImproperScheme imp(model, k, h, options.q);
      const ScalarBootstrap boot = imp.bootstrap();
      path.values = {psi_at_zero(model.theta()), boot.psi1};
      double k_prev = boot.k0;
      for (std::size_t n = 1; n < steps; ++n) {
        const ScalarStep st = imp.step(path.values, k_prev);
        push_checked(path, st.next, n + 1);
        k_prev = st.k;
      }
      add_coefficient_metadata(path, k);
      path.metadata["q"] = std::to_string(options.q);
      return path;
    }
    case TsrkScheme::legendre_history: {
      const TsrkCoefficients& k = derive_tsrk4_coefficients();
      LegendreHistoryScheme leg(model, k, h, steps, options.policy);
      const ScalarBootstrap boot = leg.bootstrap();
      path.values = {psi_at_zero(model.theta()), boot.psi1};
      std::vector<double> ks{boot.k0};
      ks.reserve(steps);
      for (std::size_t n = 1; n < steps; ++n) {
        const ScalarStep st = leg.step(path.values, ks, boot);
        push_checked(path, st.next, n + 1);
        ks.push_back(st.k);
      }
      add_coefficient_metadata(path, k);
      path.metadata["kernel_policy"] = to_string(options.policy);
      return path;
    }
  }
  throw ConfigError("unhandled TSRK scheme");
}

}  // namespace ruinrk
