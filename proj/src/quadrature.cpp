#include "ruinrk/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "ruinrk/errors.hpp"
#include "ruinrk/linalg.hpp"
#include "ruinrk/model.hpp"

namespace ruinrk {

double simpson13_weight(std::size_t n, std::size_t j, double h) {
  if (n == 0 || j > n) return 0.0;
  auto composite = [h](std::size_t last, std::size_t i) {
    if (i == 0 || i == last) return h / 3.0;
    return (i % 2 == 1) ? 4.0 * h / 3.0 : 2.0 * h / 3.0;
  };
  if (n % 2 == 0) return composite(n, j);
  const std::size_t k = n - 1;
  double w = 0.0;
  if (k > 0 && j <= k) w += composite(k, j);
  if (j == k || j == n) w += h / 2.0;
  return w;
}

double simpson13_history(std::span<const double> g, double h) {
  if (g.empty()) throw DomainError("simpson13_history needs at least one sample");
  const std::size_t n = g.size() - 1;
  if (n == 0) return 0.0;
  const std::size_t k = (n % 2 == 0) ? n : n - 1;
  double result = 0.0;
  if (k > 0) {
    double odd = 0.0;
    double even = 0.0;
    for (std::size_t j = 1; j < k; j += 2) odd += g[j];
    for (std::size_t j = 2; j + 1 < k; j += 2) even += g[j];
    result = h / 3.0 * (g[0] + g[k] + 4.0 * odd + 2.0 * even);
  }
  if (k != n) result += h / 2.0 * (g[n - 1] + g[n]);
  return result;
}

std::string to_string(RuleKind kind) {
  switch (kind) {
    case RuleKind::legendre01:
      return "legendre01";
    case RuleKind::pareto_truncated:
      return "pareto-truncated";
    case RuleKind::jacobi_improper:
      return "jacobi-improper";
  }
  return "unknown";
}

GaussRule gauss_legendre_01(int q) {
  if (q != 2) throw NotImplementedError("gauss_legendre_01 provides only the 2-point rule");
  const double off = 1.0 / (2.0 * std::sqrt(3.0));
  GaussRule rule;
  rule.kind = RuleKind::legendre01;
  rule.nodes = {0.5 - off, 0.5 + off};
  rule.transformed = rule.nodes;
  rule.weights = {0.5, 0.5};
  rule.a = 0.0;
  rule.b = 1.0;
  return rule;
}

namespace {

void check_points(int q) {
  if (q < 1 || q > 3) throw NotImplementedError("Gauss rules are provided for 1 to 3 points, got " + std::to_string(q));
}

// Width of [Y_b, Y_a] without forming the difference of the endpoints.
double y_width(double a, double b_minus_a, double b, int m) {
  const double md = m;
  return md * b_minus_a / ((a + md) * (b + md));
}

// Roots of the monic polynomial s^q + c[q-1] s^{q-1} + ... + c[0], all real.
std::vector<double> monic_roots(const std::vector<double>& c) {
  const std::size_t q = c.size();
  std::vector<double> roots;
  if (q == 1) {
    roots = {-c[0]};
  } else if (q == 2) {
    const double b = c[1];
    const double disc = std::max(0.0, b * b - 4.0 * c[0]);
    const double t = -0.5 * (b + std::copysign(std::sqrt(disc), b));
    roots = {t, t != 0.0 ? c[0] / t : 0.0};
  } else {
    const double a2 = c[2];
    const double a1 = c[1];
    const double a0 = c[0];
    const double p = a1 - a2 * a2 / 3.0;
    const double r = 2.0 * a2 * a2 * a2 / 27.0 - a2 * a1 / 3.0 + a0;
    const double shift = -a2 / 3.0;
    if (p >= 0.0) throw DegenerateIntervalError("orthogonal polynomial lost its real roots");
    const double mag = 2.0 * std::sqrt(-p / 3.0);
    const double arg = std::clamp(3.0 * r / (p * mag), -1.0, 1.0);
    const double phi = std::acos(arg) / 3.0;
    for (int k = 0; k < 3; ++k) roots.push_back(shift + mag * std::cos(phi - 2.0 * std::numbers::pi * k / 3.0));
    for (double& s : roots) {
      for (int it = 0; it < 3; ++it) {
        const double f = ((s + a2) * s + a1) * s + a0;
        const double df = (3.0 * s + 2.0 * a2) * s + a1;
        if (df == 0.0) break;
        s -= f / df;
      }
    }
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

}  // namespace

MonomialWeightRule monomial_weight_gauss(int m, double lo, double width, int q) {
  check_points(q);
  if (m < 0) throw DomainError("weight exponent must be non-negative");
  if (!(lo >= 0.0) || !std::isfinite(width)) throw DomainError("invalid weight interval");
  if (!(width >= 1e-14)) throw DegenerateIntervalError("weight interval shorter than 1e-14");

  const double half = 0.5 * width;
  const double centre = lo + half;
  const double ratio = half / centre;

  // Centred moments of (1 + ratio s)^m on [-1, 1]; every surviving term is
  // positive so the sums carry no cancellation.
  const int n_mom = 2 * q;
  std::vector<double> mu(n_mom, 0.0);
  for (int k = 0; k < n_mom; ++k) {
    double binom = 1.0;
    double rpow = 1.0;
    double sum = 0.0;
    for (int i = 0; i <= m; ++i) {
      if ((k + i) % 2 == 0) sum += binom * rpow * 2.0 / (k + i + 1);
      binom = binom * (m - i) / (i + 1);
      rpow *= ratio;
    }
    mu[k] = sum;
  }

  // Monic orthogonal polynomial: sum_j c_j mu_{i+j} = -mu_{i+q}.
  const auto nq = static_cast<std::size_t>(q);
  std::vector<double> hankel(nq * nq);
  std::vector<double> rhs(nq);
  for (std::size_t i = 0; i < nq; ++i) {
    for (std::size_t j = 0; j < nq; ++j) hankel[i * nq + j] = mu[i + j];
    rhs[i] = -mu[i + nq];
  }
  if (!solve_dense(hankel, rhs, nq, 1e-300)) throw DegenerateIntervalError("singular moment matrix");

  const std::vector<double> s = monic_roots(rhs);
  for (double si : s) {
    if (!(si > -1.0 && si < 1.0)) throw DegenerateIntervalError("Gauss node left the weight interval");
  }
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (!(s[i] > s[i - 1])) throw DegenerateIntervalError("coincident Gauss nodes");
  }

  // Weights: integrals of the Lagrange basis polynomials.
  std::vector<double> w(nq);
  if (q == 1) {
    w[0] = mu[0];
  } else if (q == 2) {
    w[0] = (mu[1] - s[1] * mu[0]) / (s[0] - s[1]);
    w[1] = (mu[1] - s[0] * mu[0]) / (s[1] - s[0]);
  } else {
    for (std::size_t r = 0; r < 3; ++r) {
      const double p = s[(r + 1) % 3];
      const double t = s[(r + 2) % 3];
      w[r] = (mu[2] - (p + t) * mu[1] + p * t * mu[0]) / ((s[r] - p) * (s[r] - t));
    }
  }

  const double scale = half * ipow(centre, m);
  MonomialWeightRule rule;
  rule.nodes.resize(nq);
  rule.weights.resize(nq);
  for (std::size_t r = 0; r < nq; ++r) {
    rule.nodes[r] = centre + half * s[r];
    rule.weights[r] = scale * w[r];
  }
  return rule;
}

MomentVector pareto_moments(double a, double b, int m, int q) {
  if (q < 1) throw DomainError("moment count must be positive");
  if (m < 1) throw DomainError("pareto index m must be a positive integer");
  if (!(a >= 0.0)) throw DomainError("lag interval must start at a >= 0");
  if (!(b > a)) throw DegenerateIntervalError("empty lag interval: need a < b");
  if (!std::isfinite(b)) throw DomainError("lag interval must be finite");

  const double md = m;
  MomentVector mv;
  mv.m = m;
  mv.ya = md / (a + md);
  mv.yb = md / (b + md);
  const double width = y_width(a, b - a, b, m);
  const double rel = width / mv.yb;
  mv.values.resize(static_cast<std::size_t>(2 * q));
  for (int k = 0; k < 2 * q; ++k) {
    const double p = m + k + 1;
    // Y_b^p ((Y_a/Y_b)^p - 1)/p keeps short intervals accurate.
    mv.values[k] = rel < 0.5 ? std::pow(mv.yb, p) * std::expm1(p * std::log1p(rel)) / p
                             : (std::pow(mv.ya, p) - std::pow(mv.yb, p)) / p;
  }
  return mv;
}

namespace {

GaussRule pareto_rule(double a, double b, double b_minus_a, int m, int q) {
  check_points(q);
  if (m < 1) throw DomainError("pareto index m must be a positive integer");
  if (!(a >= 0.0)) throw DomainError("lag interval must start at a >= 0");
  if (!std::isfinite(b)) throw DomainError("truncated Pareto rule needs a finite upper lag");
  if (!(b > a) || !(b_minus_a > 0.0)) throw DegenerateIntervalError("empty lag interval: need a < b");

  const double md = m;
  const double yb = md / (b + md);
  const MonomialWeightRule y_rule = monomial_weight_gauss(m, yb, y_width(a, b_minus_a, b, m), q);

  GaussRule rule;
  rule.kind = RuleKind::pareto_truncated;
  rule.m = m;
  rule.a = a;
  rule.b = b;
  const auto nq = y_rule.nodes.size();
  // x decreases with y; store ascending in x.
  for (std::size_t i = 0; i < nq; ++i) {
    const std::size_t r = nq - 1 - i;
    const double y = y_rule.nodes[r];
    rule.nodes.push_back(md * (1.0 - y) / y);
    rule.weights.push_back((md + 1.0) * y_rule.weights[r]);
    rule.transformed.push_back(y);
  }
  return rule;
}

}  // namespace

GaussRule pareto_truncated_gauss(double a, double b, int m, int q) { return pareto_rule(a, b, b - a, m, q); }

GaussRule gauss_jacobi_improper(int m, int q) {
  check_points(q);
  if (m < 1) throw DomainError("pareto index m must be a positive integer");
  // Weight (1+t)^m on [-1,1] is sigma^m on [0,2] with sigma = 1 + t.
  const MonomialWeightRule sigma_rule = monomial_weight_gauss(m, 0.0, 2.0, q);
  const double md = m;
  const double prefactor = (md + 1.0) / std::ldexp(1.0, m + 1);

  GaussRule rule;
  rule.kind = RuleKind::jacobi_improper;
  rule.m = m;
  rule.a = 0.0;
  rule.b = std::numeric_limits<double>::infinity();
  const auto nq = sigma_rule.nodes.size();
  for (std::size_t i = 0; i < nq; ++i) {
    const std::size_t r = nq - 1 - i;
    const double sigma = sigma_rule.nodes[r];
    const double t = sigma - 1.0;
    rule.nodes.push_back(md * (1.0 - t) / (1.0 + t));
    rule.weights.push_back(prefactor * sigma_rule.weights[r]);
    rule.transformed.push_back(t);
  }
  return rule;
}

LagRuleCache::LagRuleCache(int m, int q, double c, double h) : m_(m), q_(q), c_(c), h_(h) {
  check_points(q);
  if (!(h > 0.0)) throw DomainError("step must be positive");
}

GaussRule LagRuleCache::build(std::size_t lag_index) const {
  if (lag_index == 0) throw DomainError("history panels start at lag index 1");
  const double j = static_cast<double>(lag_index);
  const double a = (j - 1.0 + c_) * h_;
  const double b = (j + c_) * h_;
  return pareto_rule(a, b, h_, m_, q_);
}

const GaussRule& LagRuleCache::get(std::size_t lag_index) {
  if (lag_index >= rules_.size()) rules_.resize(lag_index + 1);
  auto& slot = rules_[lag_index];
  if (slot) {
    ++hits_;
  } else {
    ++misses_;
    slot = build(lag_index);
  }
  return *slot;
}

}  // namespace ruinrk
