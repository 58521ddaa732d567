#include "ruinrk/model.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <sstream>

#include "ruinrk/errors.hpp"
#include "ruinrk/interpolation.hpp"

namespace ruinrk {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_argument(double u) {
  if (!(u >= 0.0)) {
    throw DomainError("claim distribution evaluated at negative or NaN argument " + std::to_string(u));
  }
}

}  // namespace

double ipow(double x, int n) {
  double result = 1.0;
  while (n > 0) {
    if (n & 1) result *= x;
    x *= x;
    n >>= 1;
  }
  return result;
}

ClaimDistribution ClaimDistribution::gamma2(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("gamma2 rate must be positive and finite");
  return ClaimDistribution(Gamma2{beta});
}

ClaimDistribution ClaimDistribution::pareto_lomax(int m) {
  if (m < 1) throw DomainError("pareto index m must be a positive integer");
  return ClaimDistribution(ParetoLomax{m});
}

ClaimDistribution ClaimDistribution::exponential(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("exponential rate must be positive and finite");
  return ClaimDistribution(Exponential{beta});
}

double ClaimDistribution::tail(double u) const {
  check_argument(u);
  return std::visit(overloaded{
                        [u](const Gamma2& g) { return std::exp(-g.beta * u) * (1.0 + g.beta * u); },
                        [u](const ParetoLomax& p) {
                          const double m = p.m;
                          return ipow(m / (u + m), p.m + 1);
                        },
                        [u](const Exponential& e) { return std::exp(-e.beta * u); },
                    },
                    law_);
}

double ClaimDistribution::density(double u) const {
  check_argument(u);
  return std::visit(overloaded{
                        [u](const Gamma2& g) { return g.beta * g.beta * u * std::exp(-g.beta * u); },
                        [u](const ParetoLomax& p) {
                          const double m = p.m;
                          return (m + 1.0) / m * ipow(m / (u + m), p.m + 2);
                        },
                        [u](const Exponential& e) { return e.beta * std::exp(-e.beta * u); },
                    },
                    law_);
}

double ClaimDistribution::mean() const {
  return std::visit(overloaded{
                        [](const Gamma2& g) { return 2.0 / g.beta; },
                        [](const ParetoLomax&) { return 1.0; },
                        [](const Exponential& e) { return 1.0 / e.beta; },
                    },
                    law_);
}

std::string ClaimDistribution::spec() const {
  std::ostringstream out;
  const auto num = [](double x) {
    std::array<char, 32> buf{};
    const auto r = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), r.ptr);
  };
  std::visit(overloaded{
                 [&](const Gamma2& g) { out << "gamma2:beta=" << num(g.beta); },
                 [&](const ParetoLomax& p) { out << "pareto:m=" << p.m; },
                 [&](const Exponential& e) { out << "exponential:beta=" << num(e.beta); },
             },
             law_);
  return out.str();
}

double tail(const ClaimDistribution& dist, double u) { return dist.tail(u); }
double density(const ClaimDistribution& dist, double u) { return dist.density(u); }

ModelParams::ModelParams(ClaimDistribution claims, double theta, double lambda)
    : claims_(claims), theta_(theta), lambda_(lambda), c_(0.0) {
  if (!(theta > 0.0) || !std::isfinite(theta)) {
    throw ModelError("safety loading must be positive (net profit condition), got " + std::to_string(theta));
  }
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("claim intensity must be positive");
  c_ = (1.0 + theta) * lambda * claims_.mean();
}

double psi_at_zero(double theta) {
  if (!(theta > 0.0)) throw ModelError("safety loading must be positive (net profit condition)");
  return 1.0 / (1.0 + theta);
}

double lambda_over_c(const ModelParams& model) {
  // Written per law so the common cases come out exact, e.g. beta/(2(1+theta)).
  const double one_plus = 1.0 + model.theta();
  return std::visit(overloaded{
                        [&](const Gamma2& g) { return g.beta / (2.0 * one_plus); },
                        [&](const ParetoLomax&) { return 1.0 / one_plus; },
                        [&](const Exponential& e) { return e.beta / one_plus; },
                    },
                    model.claims().law());
}

std::size_t SolutionPath::nearest_node(double u) const {
  if (values.empty()) throw DomainError("empty solution path");
  const long long n = std::llround(u / h);
  if (n < 0) return 0;
  return std::min<std::size_t>(static_cast<std::size_t>(n), values.size() - 1);
}

double SolutionPath::at(double u) const { return cubic_interpolate(values, h, u); }

double monotonicity_violation(std::span<const double> values, double psi0) {
  double worst = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    worst = std::max(worst, -values[i]);
    worst = std::max(worst, values[i] - psi0);
    if (i > 0) worst = std::max(worst, values[i] - values[i - 1]);
  }
  return worst;
}

}  // namespace ruinrk
