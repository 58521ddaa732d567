#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace ruinrk {

/// Erlang-2 claims: Gamma with shape 2 and rate `beta`.
struct Gamma2 {
  double beta;
};

/// Shifted Pareto (Lomax) claims with integer index `m`; tail (m/(u+m))^(m+1),
/// unit mean for every m.
struct ParetoLomax {
  int m;
};

struct Exponential {
  double beta;
};

/// Claim-size law. Immutable once constructed.
class ClaimDistribution {
 public:
  using Law = std::variant<Gamma2, ParetoLomax, Exponential>;

  static ClaimDistribution gamma2(double beta);
  static ClaimDistribution pareto_lomax(int m);
  static ClaimDistribution exponential(double beta);

  double tail(double u) const;
  double density(double u) const;
  double mean() const;

  const Law& law() const noexcept { return law_; }

  template <class T>
  const T* get_if() const noexcept {
    return std::get_if<T>(&law_);
  }

  /// Short spelling in the CLI grammar, e.g. "gamma2:beta=2.4".
  std::string spec() const;

 private:
  explicit ClaimDistribution(Law law) : law_(law) {}
  Law law_;
};

double tail(const ClaimDistribution& dist, double u);
double density(const ClaimDistribution& dist, double u);

/// x^n for small non-negative integer n by repeated squaring.
double ipow(double x, int n);

/// Classical compound-Poisson risk model. The premium rate is always derived
/// from the loading: c = (1 + theta) * lambda * E[X].
class ModelParams {
 public:
  ModelParams(ClaimDistribution claims, double theta, double lambda = 1.0);

  double lambda() const noexcept { return lambda_; }
  double theta() const noexcept { return theta_; }
  double premium_rate() const noexcept { return c_; }
  const ClaimDistribution& claims() const noexcept { return claims_; }

 private:
  ClaimDistribution claims_;
  double theta_;
  double lambda_;
  double c_;
};

/// psi(0) = 1/(1+theta). Throws ModelError when theta <= 0.
double psi_at_zero(double theta);

/// lambda / c = 1 / ((1+theta) E[X]); every scheme depends on the model only
/// through this ratio, the tail and the density.
double lambda_over_c(const ModelParams& model);

/// Ruin probabilities on the uniform grid u_n = n h.
struct SolutionPath {
  double h = 0.0;
  std::vector<double> values;
  std::string method;
  ModelParams model;
  std::map<std::string, std::string> metadata;

  std::size_t size() const noexcept { return values.size(); }
  double u_at(std::size_t n) const noexcept { return static_cast<double>(n) * h; }
  double u_max() const noexcept { return values.empty() ? 0.0 : u_at(values.size() - 1); }

  /// Index of the grid node closest to u (ties resolved by llround).
  std::size_t nearest_node(double u) const;
  /// psi at u: exact node value on the grid, cubic interpolation off it.
  double at(double u) const;
};

/// Largest violation of the path invariants: values in [-tol, psi0 + tol] and
/// nonincreasing up to tol. Returns 0 when every check holds exactly.
double monotonicity_violation(std::span<const double> values, double psi0);

}  // namespace ruinrk
