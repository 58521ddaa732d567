#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ruinrk/kernels.hpp"
#include "ruinrk/model.hpp"

namespace ruinrk::app {

enum class Method { rk4_s13, tsrk4_g, tsrk4_phl, tsrk4_improper, tsrk6_g };

std::string to_string(Method method);
Method parse_method(const std::string& name);
/// Convergence order the method is designed for.
int nominal_order(Method method);

enum class Format { csv, json };

std::string to_string(Format format);
Format parse_format(const std::string& name);

/// `name:key=value[,key=value]` with name in {gamma2, pareto, exponential}.
/// Unknown names or keys are rejected.
ClaimDistribution parse_distribution(const std::string& spec);

/// Comma list of values and `start:step:stop` ranges, e.g. "0,0.5,1:1:10".
std::vector<double> parse_points(const std::string& text);

struct RunConfig {
  std::string dist = "gamma2:beta=2.4";
  double theta = 0.2;
  double lambda = 1.0;
  double h = 0.0016;
  double u_max = 10.0;
  Method method = Method::rk4_s13;
  int q = 2;
  std::vector<double> report{0.0};
  Format format = Format::csv;
  std::optional<std::filesystem::path> out;
  std::uint64_t seed = 20240601;
  std::optional<std::filesystem::path> m2_coefficients;
  ExecPolicy policy = ExecPolicy::parallel;
};

/// Throws ConfigError naming the first violated constraint.
void validate(const RunConfig& config);

ModelParams make_model(const RunConfig& config);

/// Solves with the configured method on [0, u_max].
SolutionPath run_method(const RunConfig& config);

/// Solves `method` for a prepared model.
SolutionPath run_method(const ModelParams& model, Method method, double h, double u_max, int q,
                        const std::optional<std::filesystem::path>& m2_coefficients,
                        ExecPolicy policy = ExecPolicy::parallel);

}  // namespace ruinrk::app
