#include "ruinrk/app/config.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

#include "ruinrk/errors.hpp"
#include "ruinrk/rk4.hpp"
#include "ruinrk/tsrk.hpp"

namespace ruinrk::app {

namespace {

const std::map<std::string, Method>& method_names() {
  static const std::map<std::string, Method> names{{"rk4-s13", Method::rk4_s13},
                                                   {"tsrk4-g", Method::tsrk4_g},
                                                   {"tsrk4-phl", Method::tsrk4_phl},
                                                   {"tsrk4-improper", Method::tsrk4_improper},
                                                   {"tsrk6-g", Method::tsrk6_g}};
  return names;
}

double parse_double(const std::string& what, const std::string& text) {
  double value = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw ConfigError(what + ": '" + text + "' is not a number");
  }
  return value;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string::npos) return {};
  return s.substr(first, s.find_last_not_of(" \t") - first + 1);
}

}  // namespace

std::string to_string(Method method) {
  for (const auto& [name, m] : method_names()) {
    if (m == method) return name;
  }
  return "unknown";
}

Method parse_method(const std::string& name) {
  const auto it = method_names().find(name);
  if (it == method_names().end()) throw ConfigError("unknown method '" + name + "'");
  return it->second;
}

int nominal_order(Method method) { return method == Method::tsrk6_g ? 6 : 4; }

std::string to_string(Format format) { return format == Format::csv ? "csv" : "json"; }

Format parse_format(const std::string& name) {
  if (name == "csv") return Format::csv;
  if (name == "json") return Format::json;
  throw ConfigError("unknown format '" + name + "' (expected csv or json)");
}

ClaimDistribution parse_distribution(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string name = trim(spec.substr(0, colon));
  std::map<std::string, std::string> kv;
  if (colon != std::string::npos) {
    std::istringstream in(spec.substr(colon + 1));
    std::string item;
    while (std::getline(in, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw ConfigError("distribution parameter '" + item + "' must be key=value");
      const std::string key = trim(item.substr(0, eq));
      if (!kv.emplace(key, trim(item.substr(eq + 1))).second) {
        throw ConfigError("distribution parameter '" + key + "' given twice");
      }
    }
  }
  auto single = [&](const std::string& key) -> double {
    for (const auto& [k, v] : kv) {
      if (k != key) throw ConfigError("unknown parameter '" + k + "' for distribution '" + name + "'");
    }
    const auto it = kv.find(key);
    if (it == kv.end()) throw ConfigError("distribution '" + name + "' needs parameter '" + key + "'");
    return parse_double(name + ":" + key, it->second);
  };
  try {
    if (name == "gamma2") return ClaimDistribution::gamma2(single("beta"));
    if (name == "exponential") return ClaimDistribution::exponential(single("beta"));
    if (name == "pareto") {
      const double m = single("m");
      if (m != std::floor(m) || m < 1 || m > 1e6) throw ConfigError("pareto:m must be a positive integer");
      return ClaimDistribution::pareto_lomax(static_cast<int>(m));
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(std::string("invalid distribution '") + spec + "': " + e.what());
  }
  throw ConfigError("unknown distribution '" + name + "' (expected gamma2, pareto or exponential)");
}

std::vector<double> parse_points(const std::string& text) {
  std::vector<double> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (item.empty()) throw ConfigError("empty entry in point list '" + text + "'");
    const auto c1 = item.find(':');
    if (c1 == std::string::npos) {
      out.push_back(parse_double("point", item));
      continue;
    }
    const auto c2 = item.find(':', c1 + 1);
    if (c2 == std::string::npos) throw ConfigError("range '" + item + "' must be start:step:stop");
    const double start = parse_double("range start", item.substr(0, c1));
    const double step = parse_double("range step", item.substr(c1 + 1, c2 - c1 - 1));
    const double stop = parse_double("range stop", item.substr(c2 + 1));
    if (!(step > 0.0) || stop < start) throw ConfigError("range '" + item + "' needs step > 0 and stop >= start");
    const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9));
    if (count > 10'000'000) throw ConfigError("range '" + item + "' has too many points");
    for (std::size_t i = 0; i <= count; ++i) out.push_back(start + static_cast<double>(i) * step);
  }
  if (out.empty()) throw ConfigError("point list is empty");
  return out;
}

void validate(const RunConfig& config) {
  const ClaimDistribution claims = parse_distribution(config.dist);
  if (!(config.theta > 0.0)) throw ConfigError("--theta must be positive (net profit condition)");
  if (!(config.lambda > 0.0)) throw ConfigError("--lambda must be positive");
  if (!(config.h > 0.0) || !std::isfinite(config.h)) throw ConfigError("--h must be positive");
  if (!(config.u_max >= 0.0) || !std::isfinite(config.u_max)) throw ConfigError("--umax must be non-negative");
  if (config.q < 1 || config.q > 3) throw ConfigError("--q must be 1, 2 or 3");
  for (double u : config.report) {
    if (!(u >= 0.0)) throw ConfigError("report point " + std::to_string(u) + " is negative");
    if (u > config.u_max * (1.0 + 1e-12)) {
      std::ostringstream msg;
      msg << "report point " << u << " exceeds --umax " << config.u_max;
      throw ConfigError(msg.str());
    }
  }
  const bool gamma = claims.get_if<Gamma2>() != nullptr;
  const bool pareto = claims.get_if<ParetoLomax>() != nullptr;
  switch (config.method) {
    case Method::rk4_s13:
      break;
    case Method::tsrk4_g:
      if (pareto) throw ConfigError("tsrk4-g needs light-tailed claims; use tsrk4-phl for pareto");
      break;
    case Method::tsrk4_phl:
    case Method::tsrk4_improper:
      if (!pareto) throw ConfigError(to_string(config.method) + " needs pareto claims");
      break;
    case Method::tsrk6_g:
      if (!gamma) throw ConfigError("tsrk6-g needs gamma2 claims");
      if (!config.m2_coefficients) throw ConfigError("tsrk6-g needs --m2-coefficients");
      break;
  }
  if (config.method != Method::rk4_s13 && config.u_max < 2.0 * config.h * (1.0 - 1e-12)) {
    throw ConfigError("two-step methods need --umax >= 2 h");
  }
}

ModelParams make_model(const RunConfig& config) {
  return ModelParams(parse_distribution(config.dist), config.theta, config.lambda);
}

SolutionPath run_method(const ModelParams& model, Method method, double h, double u_max, int q,
                        const std::optional<std::filesystem::path>& m2_coefficients, ExecPolicy policy) {
  TsrkOptions options;
  options.q = q;
  options.policy = policy;
  SolutionPath path = [&] {
    switch (method) {
      case Method::rk4_s13:
        return solve_rk4(model, h, u_max, policy);
      case Method::tsrk4_g:
        return solve_tsrk(model, h, u_max,
                          model.claims().get_if<Gamma2>() ? TsrkScheme::gamma_ode_m1 : TsrkScheme::legendre_history,
                          options);
      case Method::tsrk4_phl:
        return solve_tsrk(model, h, u_max, TsrkScheme::pareto_phl, options);
      case Method::tsrk4_improper:
        return solve_tsrk(model, h, u_max, TsrkScheme::pareto_improper, options);
      case Method::tsrk6_g:
        if (!m2_coefficients) throw ConfigError("tsrk6-g needs --m2-coefficients");
        options.m2_coefficients = load_tsrk_coefficients(*m2_coefficients);
        return solve_tsrk(model, h, u_max, TsrkScheme::gamma_ode_m2, options);
    }
    throw ConfigError("unhandled method");
  }();
  path.metadata["scheme"] = path.method;
  path.method = to_string(method);
  return path;
}

SolutionPath run_method(const RunConfig& config) {
  return run_method(make_model(config), config.method, config.h, config.u_max, config.q, config.m2_coefficients,
                    config.policy);
}

}  // namespace ruinrk::app
