#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

namespace ruinrk {

/// Coefficients (eta1, eta2, alpha, beta) with
/// psi(u_n + t h) ~ eta1 psi_n + eta2 psi_{n-1} + h alpha k^{[n-1]} + h beta k^{[n]},
/// exact for cubics when k^{[n-1]}, k^{[n]} are psi' at u_n + (c-1)h, u_n + c h.
struct TwoStepInterpolant {
  double eta1 = 0.0;
  double eta2 = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
};

TwoStepInterpolant two_step_interpolant(double t, double c);

/// Full coefficient set of a two-step Runge-Kutta method with `stages`
/// internal stages. Matrices are row-major stages x stages.
struct TsrkCoefficients {
  int stages = 1;
  int order = 4;
  int stage_order = 3;

  std::vector<double> c;
  double theta1 = 0.0;
  double theta2 = 0.0;
  std::vector<double> v;
  std::vector<double> w;
  std::vector<double> delta1;  // delta_{i1}
  std::vector<double> delta2;  // delta_{i2}
  std::vector<double> a;
  std::vector<double> b;

  // Quadrature and consistency data; populated by the fourth-order derivation.
  int mu0 = 0;
  int mu1 = 0;
  std::vector<double> omega;  // history rule weights on [0, 1]
  std::vector<double> xi;     // history rule nodes
  std::vector<double> w_local;  // w_{1j}
  std::vector<double> d_local;  // d_{1j}
  std::vector<double> zeta1, zeta2, rho, gamma;
  std::vector<double> eta1, eta2, alpha, beta;
  std::vector<double> start_c;                     // c~_l
  std::vector<std::array<double, 3>> start_gamma;  // gamma~_{jl}

  std::vector<double> order_roots;  // every real c1 solving the order conditions
  std::string root_selection;

  double a_at(std::size_t i, std::size_t j) const { return a[i * static_cast<std::size_t>(stages) + j]; }
  double b_at(std::size_t i, std::size_t j) const { return b[i * static_cast<std::size_t>(stages) + j]; }
  bool has_quadrature_data() const { return !omega.empty(); }
};

struct Residual {
  std::string name;
  double value = 0.0;
};

/// Derives the one-stage fourth-order method: order conditions for
/// (theta2, v1, w1, c1), stage conditions for (delta12, a11, b11), then the
/// history, local and starting consistency coefficients for the 2-point
/// Gauss-Legendre choices. Cached after the first call.
const TsrkCoefficients& derive_tsrk4_coefficients();

/// Every condition of the scheme evaluated term by term from `coeffs`.
std::vector<Residual> coefficient_residuals(const TsrkCoefficients& coeffs);
double max_abs_residual(const std::vector<Residual>& residuals);

/// Reads a `key = value` coefficient file (`#` comments) for a two-stage
/// method and rejects it unless every order and stage residual is below `tol`.
TsrkCoefficients load_tsrk_coefficients(const std::filesystem::path& path, double tol = 1e-12);
TsrkCoefficients parse_tsrk_coefficients(const std::string& text, double tol = 1e-12);

}  // namespace ruinrk
