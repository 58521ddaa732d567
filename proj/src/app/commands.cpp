#include "ruinrk/app/commands.hpp"

#include <cmath>
#include <exception>
#include <iostream>
#include <limits>

#include "ruinrk/errors.hpp"
#include "ruinrk/exact.hpp"
#include "ruinrk/mc.hpp"
#include "ruinrk/rk4.hpp"
#include "ruinrk/tsrk.hpp"
#include "ruinrk/app/reference.hpp"

namespace ruinrk::app {

namespace {

Json config_json(const RunConfig& c) {
  Json j;
  j["dist"] = c.dist;
  j["theta"] = c.theta;
  j["lambda"] = c.lambda;
  j["method"] = to_string(c.method);
  j["h"] = c.h;
  j["umax"] = c.u_max;
  j["q"] = c.q;
  j["report"] = c.report;
  j["kernel_policy"] = to_string(c.policy);
  if (c.m2_coefficients) j["m2_coefficients"] = c.m2_coefficients->string();
  return j;
}

Json path_metadata(const SolutionPath& path) {
  Json j;
  j["model"] = path.model.claims().spec();
  j["premium_rate"] = path.model.premium_rate();
  j["nodes"] = path.size();
  for (const auto& [key, value] : path.metadata) j[key] = value;
  return j;
}

Json coefficient_json(const TsrkCoefficients& k) {
  Json j;
  j["c1"] = k.c[0];
  j["theta1"] = k.theta1;
  j["theta2"] = k.theta2;
  j["v1"] = k.v[0];
  j["w1"] = k.w[0];
  j["delta11"] = k.delta1[0];
  j["delta12"] = k.delta2[0];
  j["a11"] = k.a[0];
  j["b11"] = k.b[0];
  j["order_roots"] = k.order_roots;
  j["root_selection"] = k.root_selection;
  j["max_residual"] = max_abs_residual(coefficient_residuals(k));
  return j;
}

double round_to(double x, int decimals) {
  const double scale = std::pow(10.0, decimals);
  return std::round(x * scale) / scale;
}

CommandResult table1(const std::filesystem::path& dir, ExecPolicy policy) {
  const ReferenceTable ref = load_reference_table(dir / "table1.csv");
  const double tol = ref.tolerance("exact_abs");
  const ModelParams model(ClaimDistribution::gamma2(2.4), 0.2);
  const double h = 0.0016;
  CommandResult res;
  res.report.command = "table 1";
  res.report.config = {{"dist", model.claims().spec()}, {"theta", 0.2}, {"h", h}, {"tolerance_exact_abs", tol}};
  for (Method method : {Method::rk4_s13, Method::tsrk4_g}) {
    const SolutionPath path = run_method(model, method, h, 10.0, 2, std::nullopt, policy);
    const std::string printed = method == Method::rk4_s13 ? "rk4_s13" : "tsrk4_g";
    for (std::size_t i = 0; i < ref.rows.size(); ++i) {
      const double u = ref.at(i, "u");
      const double psi = path.at(u);
      const double survival = 1.0 - psi;
      const double dev = survival - ref.at(i, "exact");
      const bool ok = std::abs(dev) <= tol;
      if (!ok) res.status = kExitTolerance;
      res.report.rows.push_back(
          {u, psi, path.method, h,
           {{"reference_exact", ref.at(i, "exact")},
            {"deviation", dev},
            {"printed", ref.at(i, printed)},
            {"matches_printed", round_to(survival, 3) == round_to(ref.at(i, printed), 3)},
            {"within_tolerance", ok}}});
    }
    res.report.metadata[to_string(method)] = path_metadata(path);
  }
  res.report.metadata["tsrk4_coefficients"] = coefficient_json(derive_tsrk4_coefficients());
  return res;
}

CommandResult table2(const std::filesystem::path& dir, ExecPolicy policy) {
  const ReferenceTable ref = load_reference_table(dir / "table2.csv");
  const double tol = ref.tolerance("exact_abs");
  const ModelParams model(ClaimDistribution::gamma2(1.0), 1.5);
  const double h = 0.0016;
  const double u_max = 15.0;
  CommandResult res;
  res.report.command = "table 2";
  res.report.config = {{"dist", model.claims().spec()}, {"theta", 1.5}, {"h", h}, {"tolerance_exact_abs", tol}};
  for (Method method : {Method::rk4_s13, Method::tsrk4_g}) {
    const SolutionPath path = run_method(model, method, h, u_max, 2, std::nullopt, policy);
    const std::string printed = method == Method::rk4_s13 ? "rk4_s13" : "tsrk4_g";
    for (std::size_t i = 0; i < ref.rows.size(); ++i) {
      const double u = ref.at(i, "u");
      const double psi = path.at(u);
      const double dev = psi - ref.at(i, "exact");
      const bool ok = std::abs(dev) <= tol;
      if (!ok) res.status = kExitTolerance;
      const std::size_t node = path.nearest_node(u);
      res.report.rows.push_back({u, psi, path.method, h,
                                 {{"reference_exact", ref.at(i, "exact")},
                                  {"deviation", dev},
                                  {"closed_form", exact_gamma2(model, u)},
                                  {"printed", ref.at(i, printed)},
                                  {"nearest_node_u", path.u_at(node)},
                                  {"nearest_node_psi", path.values[node]},
                                  {"nearest_node_minus_printed", path.values[node] - ref.at(i, printed)},
                                  {"within_tolerance", ok}}});
    }
    res.report.metadata[to_string(method)] = path_metadata(path);
  }
  return res;
}

CommandResult table3(const std::filesystem::path& dir, int q, ExecPolicy policy) {
  const ReferenceTable ref = load_reference_table(dir / "table3.csv");
  const double tol = ref.tolerance("ram_abs_phl");
  const double h = 0.01;
  const std::vector<double> thetas{0.10, 0.25, 1.00};
  const std::vector<Method> methods{Method::rk4_s13, Method::tsrk4_phl};

  // The six solves are independent; with several threads they run side by
  // side, each with serial history sums.
  const bool side_by_side = policy == ExecPolicy::parallel && max_threads() > 1;
  const ExecPolicy inner = side_by_side ? ExecPolicy::serial : policy;
  std::vector<std::optional<SolutionPath>> paths(thetas.size() * methods.size());
  std::vector<std::exception_ptr> errors(paths.size());
  const auto count = static_cast<long long>(paths.size());
#pragma omp parallel for schedule(dynamic, 1) if (side_by_side)
  for (long long idx = 0; idx < count; ++idx) {
    const auto i = static_cast<std::size_t>(idx);
    try {
      const ModelParams model(ClaimDistribution::pareto_lomax(1), thetas[i / methods.size()]);
      paths[i] = run_method(model, methods[i % methods.size()], h, 100.0, q, std::nullopt, inner);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  CommandResult res;
  res.report.command = "table 3";
  res.report.config = {{"dist", "pareto:m=1"}, {"h", h}, {"q", q}, {"tolerance_ram_abs_phl", tol}};
  for (std::size_t t = 0; t < thetas.size(); ++t) {
    for (std::size_t m = 0; m < methods.size(); ++m) {
      const SolutionPath& path = *paths[t * methods.size() + m];
      const std::string printed = methods[m] == Method::rk4_s13 ? "rk4_s13" : "tsrk4_phl";
      for (std::size_t i = 0; i < ref.rows.size(); ++i) {
        if (std::abs(ref.at(i, "theta") - thetas[t]) > 1e-12) continue;
        const double u = ref.at(i, "u");
        const double psi = path.at(u);
        const double dev = psi - ref.at(i, "ram");
        const bool checked = methods[m] == Method::tsrk4_phl;
        const bool ok = !checked || std::abs(dev) <= tol;
        if (!ok) res.status = kExitTolerance;
        res.report.rows.push_back({u, psi, path.method, h,
                                   {{"theta", thetas[t]},
                                    {"reference_ram", ref.at(i, "ram")},
                                    {"deviation", dev},
                                    {"printed", ref.at(i, printed)},
                                    {"printed_deviation", ref.at(i, printed) - ref.at(i, "ram")},
                                    {"within_tolerance", ok}}});
      }
      res.report.metadata[to_string(methods[m]) + "@theta=" + format_number(thetas[t])] = path_metadata(path);
    }
  }
  return res;
}

}  // namespace

CommandResult cmd_solve(const RunConfig& config) {
  validate(config);
  const SolutionPath path = run_method(config);
  CommandResult res;
  res.report.command = "solve";
  res.report.config = config_json(config);
  for (double u : config.report) {
    const double psi = path.at(u);
    res.report.rows.push_back({u, psi, path.method, config.h, {{"node", path.nearest_node(u)}}});
  }
  res.report.metadata = path_metadata(path);
  if (path.method != "rk4-s13" && path.metadata.count("theta2")) {
    res.report.metadata["tsrk4_coefficients"] = coefficient_json(derive_tsrk4_coefficients());
  }
  res.report.metadata["monotonicity_violation"] = monotonicity_violation(path.values, path.values.front());
  return res;
}

CommandResult cmd_table(int which, const std::filesystem::path& data_dir, int q, ExecPolicy policy) {
  switch (which) {
    case 1: return table1(data_dir, policy);
    case 2: return table2(data_dir, policy);
    case 3: return table3(data_dir, q, policy);
    default: throw ConfigError("table must be 1, 2 or 3");
  }
}

CommandResult cmd_converge(const RunConfig& config, const std::vector<double>& h_list) {
  if (h_list.size() < 2) throw ConfigError("an order estimate needs at least two step sizes");
  RunConfig check = config;
  for (double h : h_list) {
    check.h = h;
    validate(check);
  }
  const ModelParams model = make_model(config);
  const bool exact = has_exact_solution(model);
  double h_min = h_list.front();
  for (double h : h_list) h_min = std::min(h_min, h);
  std::optional<SolutionPath> self_ref;
  if (!exact) {
    self_ref = run_method(model, config.method, h_min / 4.0, config.u_max, config.q, config.m2_coefficients,
                          config.policy);
  }
  auto reference = [&](double u) { return exact ? exact_ruin(model, u) : self_ref->at(u); };

  CommandResult res;
  res.report.command = "converge";
  res.report.config = config_json(config);
  res.report.config["h_list"] = h_list;
  res.report.metadata["reference"] = exact ? "closed form" : "same method at h = " + format_number(h_min / 4.0);

  double prev_err = 0.0;
  double prev_h = 0.0;
  double last_order = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < h_list.size(); ++i) {
    const double h = h_list[i];
    const SolutionPath path =
        run_method(model, config.method, h, config.u_max, config.q, config.m2_coefficients, config.policy);
    double err = 0.0;
    double worst_u = config.report.front();
    for (double u : config.report) {
      const double e = std::abs(path.at(u) - reference(u));
      if (e > err) {
        err = e;
        worst_u = u;
      }
    }
    Row row{worst_u, path.at(worst_u), path.method, h, {{"max_error", err}}};
    if (i > 0) {
      last_order = std::log(prev_err / err) / std::log(prev_h / h);
      row.extra.emplace_back("order", std::isfinite(last_order) ? Json(last_order) : Json(format_number(last_order)));
    }
    res.report.rows.push_back(std::move(row));
    prev_err = err;
    prev_h = h;
  }
  const double required = nominal_order(config.method) - 0.5;
  res.report.metadata["final_order"] = std::isfinite(last_order) ? Json(last_order) : Json(format_number(last_order));
  res.report.metadata["required_order"] = required;
  if (!(last_order >= required)) res.status = kExitTolerance;
  return res;
}

CommandResult cmd_mc_check(const RunConfig& config, const McCheckOptions& mc) {
  if (mc.n_paths == 0) throw ConfigError("--paths must be positive");
  if (mc.horizon < 0.0 || !std::isfinite(mc.horizon)) throw ConfigError("--horizon must be non-negative");
  validate(config);
  const ModelParams model = make_model(config);
  const SolutionPath path = run_method(config);

  std::vector<McEstimate> est;
  Json horizons = Json::array();
  bool stable = true;
  if (mc.horizon > 0.0) {
    est = simulate_ruin_multi(model, config.report, mc.horizon, mc.n_paths, config.seed, config.policy);
    horizons.push_back(mc.horizon);
  } else {
    const double start = default_horizon(model);
    if (!(mc.max_horizon >= start)) throw ConfigError("--max-horizon is below the starting horizon");
    const AdaptiveMcResult a =
        simulate_ruin_adaptive(model, config.report, mc.n_paths, config.seed, start, mc.max_horizon, config.policy);
    est = a.estimates;
    for (double hz : a.horizons) horizons.push_back(hz);
    stable = a.stable;
  }

  CommandResult res;
  res.report.command = "mc-check";
  res.report.config = config_json(config);
  res.report.config["paths"] = mc.n_paths;
  res.report.config["horizon"] = mc.horizon;
  res.report.config["max_horizon"] = mc.max_horizon;
  res.report.config["seed"] = config.seed;
  for (std::size_t i = 0; i < config.report.size(); ++i) {
    const double u = config.report[i];
    const double psi = path.at(u);
    const McEstimate& e = est[i];
    const double diff = psi - e.estimate;
    const bool flagged = std::abs(diff) > 3.0 * e.std_error;
    if (flagged) res.status = kExitTolerance;
    res.report.rows.push_back({u, psi, path.method, config.h,
                               {{"mc_estimate", e.estimate},
                                {"mc_std_error", e.std_error},
                                {"mc_ruined", e.ruined},
                                {"difference", diff},
                                {"z", e.std_error > 0 ? diff / e.std_error : 0.0},
                                {"horizon", e.horizon},
                                {"flagged", flagged}}});
  }
  res.report.metadata = path_metadata(path);
  res.report.metadata["generator"] = kMcGenerator;
  res.report.metadata["horizons"] = horizons;
  res.report.metadata["horizon_stable"] = stable;
  return res;
}

int report_exception(bool quiet) {
  auto say = [&](const std::string& kind, const std::string& what) {
    if (!quiet) std::cerr << "ruinrk: " << kind << ": " << what << '\n';
  };
  try {
    throw;
  } catch (const ConfigError& e) {
    say("configuration error", e.what());
    return kExitConfig;
  } catch (const DomainError& e) {
    say("invalid input", e.what());
    return kExitConfig;
  } catch (const ModelError& e) {
    say("invalid model", e.what());
    return kExitConfig;
  } catch (const ExtrapolationError& e) {
    say("invalid input", e.what());
    return kExitConfig;
  } catch (const StepFailure& e) {
    say("solver failure", e.what());
    if (!quiet) std::cerr << "ruinrk: failing step index " << e.step() << '\n';
    return kExitSolver;
  } catch (const std::exception& e) {
    say("solver failure", e.what());
    return kExitSolver;
  } catch (...) {
    say("solver failure", "unknown error");
    return kExitSolver;
  }
}

}  // namespace ruinrk::app
