#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ruinrk {

/// Composite Simpson 1/3 over [0, n h] for samples g(u_0..u_n).
/// n = 0 gives 0. Odd n: Simpson on [0, u_{n-1}] plus a trapezoid on the
/// last panel.
double simpson13_history(std::span<const double> samples, double h);

/// Weight of sample j in simpson13_history for a grid of n+1 samples.
double simpson13_weight(std::size_t n, std::size_t j, double h);

enum class RuleKind { legendre01, pareto_truncated, jacobi_improper };

std::string to_string(RuleKind kind);

/// Gauss rule for a weighted integral.
///
/// For `pareto_truncated` and `jacobi_improper` the nodes are claim-size lags
/// x_r and the weights already contain the (m+1) density prefactor, so
/// sum_r weights[r] * f(nodes[r]) approximates \int f(x) p(x) dx over the lag
/// interval. `transformed` holds the nodes in the variable in which the rule
/// was built (y = m/(x+m) for the Pareto rules, t on [0,1] for Legendre).
struct GaussRule {
  RuleKind kind = RuleKind::legendre01;
  std::vector<double> nodes;
  std::vector<double> weights;
  std::vector<double> transformed;
  int m = 0;
  double a = 0.0;  // lag interval, b = +inf for the improper rule
  double b = 0.0;

  std::size_t size() const noexcept { return nodes.size(); }
  bool operator==(const GaussRule&) const = default;
};

/// q-point Gauss-Legendre on [0,1]; only q = 2 is provided.
GaussRule gauss_legendre_01(int q = 2);

/// Closed-form moments M_k = \int_{Y_b}^{Y_a} y^{m+k} dy, k = 0..2q-1,
/// with Y_a = m/(a+m), Y_b = m/(b+m).
struct MomentVector {
  std::vector<double> values;
  double ya = 0.0;
  double yb = 0.0;
  int m = 0;
};

MomentVector pareto_moments(double a, double b, int m, int q);

/// Nodes and weights for \int_lo^{lo+width} f(y) y^m dy, q <= 3 points.
/// Both the orthogonal-polynomial recurrence and the weight system are set
/// up in centred coordinates s = (y - centre)/half so that short intervals
/// do not lose precision to the near-singular raw Hankel matrix.
struct MonomialWeightRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

MonomialWeightRule monomial_weight_gauss(int m, double lo, double width, int q);

/// q-point rule for \int_a^b f(x) p(x) dx with the Pareto-Lomax density p.
GaussRule pareto_truncated_gauss(double a, double b, int m, int q);

/// q-point rule for \int_0^inf f(x) p(x) dx built from Gauss-Jacobi
/// (weight (1+t)^m on [-1,1]) and the map x = m(1-t)/(1+t).
GaussRule gauss_jacobi_improper(int m, int q);

/// Truncated Pareto rules for the history panels of one TSRK solve.
/// Panel j (j >= 1) covers lags [(j-1+c) h, (j+c) h]; the rule depends only
/// on j, so one construction serves every step.
class LagRuleCache {
 public:
  LagRuleCache(int m, int q, double c, double h);

  const GaussRule& get(std::size_t lag_index);
  GaussRule build(std::size_t lag_index) const;

  std::size_t hits() const noexcept { return hits_; }
  std::size_t misses() const noexcept { return misses_; }
  std::size_t size() const noexcept { return rules_.size(); }
  int m() const noexcept { return m_; }
  int q() const noexcept { return q_; }

 private:
  int m_;
  int q_;
  double c_;
  double h_;
  std::vector<std::optional<GaussRule>> rules_;
  std::size_t hits_ = 0;
  std::size_t misses_ = 0;
};

}  // namespace ruinrk
