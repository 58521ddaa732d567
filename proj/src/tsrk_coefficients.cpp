#include "ruinrk/tsrk_coefficients.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <set>
#include <sstream>

#include "ruinrk/errors.hpp"
#include "ruinrk/linalg.hpp"
#include "ruinrk/quadrature.hpp"

namespace ruinrk {

namespace {

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

// (x)^{tau-1}/(tau-1)! and (-1)^tau/tau!.
double taylor(double x, int tau) { return std::pow(x, tau - 1) / factorial(tau - 1); }
double sign_term(int tau) { return ((tau % 2 == 0) ? 1.0 : -1.0) / factorial(tau); }

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Residual of the fourth order condition after the first three fix
// (theta2, v1, w1) for a given c1.
double order4_gap(double c) {
  const TwoStepInterpolant p = two_step_interpolant(1.0, c);
  if (!std::isfinite(p.eta2)) return kNaN;
  return 1.0 / 24.0 - p.eta2 * sign_term(4) - p.alpha * taylor(c - 1.0, 4) - p.beta * taylor(c, 4);
}

std::vector<double> order_roots() {
  std::vector<double> roots;
  constexpr double lo = -3.0;
  constexpr double hi = 3.0;
  constexpr int n_scan = 6000;
  double x0 = lo;
  double f0 = order4_gap(x0);
  for (int i = 1; i <= n_scan; ++i) {
    const double x1 = lo + (hi - lo) * i / n_scan;
    const double f1 = order4_gap(x1);
    if (std::isfinite(f0) && std::isfinite(f1) && (f0 == 0.0 || f0 * f1 < 0.0)) {
      double a = x0, b = x1, fa = f0;
      for (int it = 0; it < 200 && b - a > 0.0; ++it) {
        const double m = 0.5 * (a + b);
        if (m == a || m == b) break;
        const double fm = order4_gap(m);
        if (!std::isfinite(fm)) break;
        if ((fa < 0.0) == (fm < 0.0)) {
          a = m;
          fa = fm;
        } else {
          b = m;
        }
      }
      const double r = std::abs(order4_gap(a)) <= std::abs(order4_gap(b)) ? a : b;
      // Sign changes across a pole leave a large gap.
      if (std::abs(order4_gap(r)) < 1e-10 &&
          (roots.empty() || std::abs(roots.back() - r) > 1e-9)) {
        roots.push_back(r);
      }
    }
    x0 = x1;
    f0 = f1;
  }
  return roots;
}

TsrkCoefficients derive() {
  TsrkCoefficients k;
  k.stages = 1;
  k.order = 4;
  k.stage_order = 3;
  k.mu0 = 2;
  k.mu1 = 2;

  k.order_roots = order_roots();
  double best_c = kNaN;
  double best_theta2 = std::numeric_limits<double>::infinity();
  for (double r : k.order_roots) {
    if (!(r > 0.0 && r <= 1.0)) continue;
    const double t2 = two_step_interpolant(1.0, r).eta2;
    if (std::abs(t2) < std::abs(best_theta2)) {
      best_theta2 = t2;
      best_c = r;
    }
  }
  if (!std::isfinite(best_c)) throw Error("order conditions have no root with c1 in (0, 1]");
  std::ostringstream sel;
  sel.precision(17);
  sel << "c1 in (0,1] with smallest |theta2| among " << k.order_roots.size() << " real roots";
  k.root_selection = sel.str();

  const double c = best_c;
  const TwoStepInterpolant ord = two_step_interpolant(1.0, c);
  k.c = {c};
  k.theta2 = ord.eta2;
  k.theta1 = 1.0 - ord.eta2;
  k.v = {ord.alpha};
  k.w = {ord.beta};

  const TwoStepInterpolant st = two_step_interpolant(c, c);
  k.delta1 = {1.0 - st.eta2};
  k.delta2 = {st.eta2};
  k.a = {st.alpha};
  k.b = {st.beta};

  const GaussRule gl = gauss_legendre_01(2);
  k.omega = gl.weights;
  k.xi = gl.nodes;
  for (std::size_t j = 0; j < 2; ++j) {
    k.w_local.push_back(c * gl.weights[j]);
    k.d_local.push_back(c * gl.nodes[j]);
  }

  for (double x : k.xi) {
    const TwoStepInterpolant h = two_step_interpolant(x, c);
    k.zeta1.push_back(1.0 - h.eta2);
    k.zeta2.push_back(h.eta2);
    k.rho.push_back(h.alpha);
    k.gamma.push_back(h.beta);
  }
  for (double d : k.d_local) {
    const TwoStepInterpolant l = two_step_interpolant(d, c);
    k.eta1.push_back(1.0 - l.eta2);
    k.eta2.push_back(l.eta2);
    k.alpha.push_back(l.alpha);
    k.beta.push_back(l.beta);
  }

  k.start_c = {0.0, 0.5, 1.0};
  for (double x : k.xi) {
    std::vector<double> m(9);
    std::vector<double> rhs(3);
    for (int tau = 1; tau <= 3; ++tau) {
      for (std::size_t l = 0; l < 3; ++l) m[(tau - 1) * 3 + l] = taylor(k.start_c[l], tau);
      rhs[tau - 1] = std::pow(x, tau) / factorial(tau);
    }
    if (!solve_dense(m, rhs, 3, 1e-14)) throw Error("starting consistency system is singular");
    k.start_gamma.push_back({rhs[0], rhs[1], rhs[2]});
  }

  const double worst = max_abs_residual(coefficient_residuals(k));
  if (!(worst <= 1e-12)) throw Error("derived coefficients violate their conditions");
  return k;
}

std::string label(const std::string& family, int tau) { return family + "[tau=" + std::to_string(tau) + "]"; }
std::string label(const std::string& family, std::size_t j, int tau) {
  return family + "[j=" + std::to_string(j + 1) + ",tau=" + std::to_string(tau) + "]";
}

}  // namespace

TwoStepInterpolant two_step_interpolant(double t, double c) {
  std::vector<double> m(9);
  std::vector<double> rhs(3);
  for (int tau = 1; tau <= 3; ++tau) {
    const std::size_t r = static_cast<std::size_t>(tau - 1) * 3;
    m[r] = sign_term(tau);
    m[r + 1] = taylor(c - 1.0, tau);
    m[r + 2] = taylor(c, tau);
    rhs[tau - 1] = std::pow(t, tau) / factorial(tau);
  }
  if (!solve_dense(m, rhs, 3, 1e-14)) return {kNaN, kNaN, kNaN, kNaN};
  return {1.0 - rhs[0], rhs[0], rhs[1], rhs[2]};
}

const TsrkCoefficients& derive_tsrk4_coefficients() {
  static std::once_flag once;
  static TsrkCoefficients cached;
  std::call_once(once, [] { cached = derive(); });
  return cached;
}

std::vector<Residual> coefficient_residuals(const TsrkCoefficients& k) {
  std::vector<Residual> out;
  const auto s = static_cast<std::size_t>(k.stages);

  out.push_back({label("order", 0), 1.0 - k.theta1 - k.theta2});
  for (int tau = 1; tau <= k.order; ++tau) {
    double r = 1.0 / factorial(tau) - k.theta2 * sign_term(tau);
    for (std::size_t i = 0; i < s; ++i) r -= k.v[i] * taylor(k.c[i] - 1.0, tau) + k.w[i] * taylor(k.c[i], tau);
    out.push_back({label("order", tau), r});
  }
  for (std::size_t i = 0; i < s; ++i) {
    out.push_back({label("stage", i, 0), 1.0 - k.delta1[i] - k.delta2[i]});
    for (int tau = 1; tau <= k.stage_order; ++tau) {
      double r = std::pow(k.c[i], tau) / factorial(tau) - k.delta2[i] * sign_term(tau);
      for (std::size_t j = 0; j < s; ++j) {
        r -= k.a_at(i, j) * taylor(k.c[j] - 1.0, tau) + k.b_at(i, j) * taylor(k.c[j], tau);
      }
      out.push_back({label("stage", i, tau), r});
    }
  }
  if (!k.has_quadrature_data()) return out;

  const double c = k.c[0];
  for (int q = 0; q <= 3; ++q) {
    double hist = -1.0 / (q + 1);
    double loc = -std::pow(c, q + 1) / (q + 1);
    for (std::size_t j = 0; j < k.omega.size(); ++j) {
      hist += k.omega[j] * std::pow(k.xi[j], q);
      loc += k.w_local[j] * std::pow(k.d_local[j], q);
    }
    out.push_back({"quadrature_history[k=" + std::to_string(q) + "]", hist});
    out.push_back({"quadrature_local[k=" + std::to_string(q) + "]", loc});
  }
  for (std::size_t j = 0; j < k.xi.size(); ++j) {
    for (int tau = 1; tau <= 3; ++tau) {
      double r = std::pow(k.xi[j], tau) / factorial(tau);
      for (std::size_t l = 0; l < k.start_c.size(); ++l) r -= k.start_gamma[j][l] * taylor(k.start_c[l], tau);
      out.push_back({label("starting", j, tau), r});
    }
    out.push_back({label("history", j, 0), 1.0 - k.zeta1[j] - k.zeta2[j]});
    for (int tau = 1; tau <= 3; ++tau) {
      const double r = std::pow(k.xi[j], tau) / factorial(tau) - sign_term(tau) * k.zeta2[j] -
                       k.rho[j] * taylor(c - 1.0, tau) - k.gamma[j] * taylor(c, tau);
      out.push_back({label("history", j, tau), r});
    }
    out.push_back({label("local", j, 0), 1.0 - k.eta1[j] - k.eta2[j]});
    for (int tau = 1; tau <= 3; ++tau) {
      const double r = std::pow(k.d_local[j], tau) / factorial(tau) - sign_term(tau) * k.eta2[j] -
                       k.alpha[j] * taylor(c - 1.0, tau) - k.beta[j] * taylor(c, tau);
      out.push_back({label("local", j, tau), r});
    }
  }
  return out;
}

double max_abs_residual(const std::vector<Residual>& residuals) {
  double worst = 0.0;
  for (const Residual& r : residuals) {
    if (!std::isfinite(r.value)) return std::numeric_limits<double>::infinity();
    worst = std::max(worst, std::abs(r.value));
  }
  return worst;
}

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_number(const std::string& key, const std::string& text) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw ConfigError("coefficient '" + key + "' has invalid value '" + text + "'");
  }
  return value;
}

int parse_int(const std::string& key, const std::string& text) {
  const double v = parse_number(key, text);
  if (v != std::floor(v) || v < 1 || v > 16) throw ConfigError("coefficient '" + key + "' must be a small integer");
  return static_cast<int>(v);
}

}  // namespace

TsrkCoefficients parse_tsrk_coefficients(const std::string& text, double tol) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("coefficient file line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ConfigError("coefficient file line " + std::to_string(line_no) + ": empty key or value");
    }
    if (!kv.emplace(key, value).second) throw ConfigError("duplicate coefficient '" + key + "'");
  }

  auto take = [&](const std::string& key) -> const std::string& {
    const auto it = kv.find(key);
    if (it == kv.end()) throw ConfigError("coefficient file is missing '" + key + "'");
    return it->second;
  };

  TsrkCoefficients k;
  k.stages = parse_int("m", take("m"));
  k.order = parse_int("order", take("order"));
  k.stage_order = parse_int("stage_order", take("stage_order"));
  if (k.stages > 2) throw ConfigError("only one- and two-stage methods are supported");
  std::set<std::string> expected{"m", "order", "stage_order", "theta1", "theta2"};
  const auto s = static_cast<std::size_t>(k.stages);
  auto num = [&](const std::string& key) {
    expected.insert(key);
    return parse_number(key, take(key));
  };
  k.theta1 = num("theta1");
  k.theta2 = num("theta2");
  for (std::size_t i = 1; i <= s; ++i) {
    const std::string n = std::to_string(i);
    k.c.push_back(num("c" + n));
    k.v.push_back(num("v" + n));
    k.w.push_back(num("w" + n));
    k.delta1.push_back(num("delta" + n + "1"));
    k.delta2.push_back(num("delta" + n + "2"));
  }
  for (std::size_t i = 1; i <= s; ++i) {
    for (std::size_t j = 1; j <= s; ++j) {
      k.a.push_back(num("a" + std::to_string(i) + std::to_string(j)));
    }
  }
  for (std::size_t i = 1; i <= s; ++i) {
    for (std::size_t j = 1; j <= s; ++j) {
      k.b.push_back(num("b" + std::to_string(i) + std::to_string(j)));
    }
  }
  for (const auto& [key, value] : kv) {
    if (!expected.count(key)) throw ConfigError("unknown coefficient '" + key + "'");
  }

  const auto residuals = coefficient_residuals(k);
  for (const Residual& r : residuals) {
    if (!(std::abs(r.value) <= tol)) {
      std::ostringstream msg;
      msg.precision(3);
      msg << "coefficient file fails " << r.name << " (residual " << r.value << ")";
      throw ConfigError(msg.str());
    }
  }
  k.root_selection = "external coefficient file";
  return k;
}

TsrkCoefficients load_tsrk_coefficients(const std::filesystem::path& path, double tol) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open coefficient file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_tsrk_coefficients(buf.str(), tol);
}

}  // namespace ruinrk
