#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ruinrk/kernels.hpp"
#include "ruinrk/model.hpp"

namespace ruinrk {

/// SplitMix64 generator; path i of a run with seed s starts from
/// state s + (i + 1) * 0x9E3779B97F4A7C15.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t state) : state_(state) {}
  std::uint64_t next();
  /// Uniform on (0, 1], 53 random bits.
  double uniform_open0();

 private:
  std::uint64_t state_;
};

inline constexpr const char* kMcGenerator = "splitmix64";

/// Draw one claim size by inverse transform.
double sample_claim(const ClaimDistribution& claims, SplitMix64& rng);

struct McEstimate {
  double u = 0.0;
  double estimate = 0.0;
  double std_error = 0.0;
  std::size_t n_paths = 0;
  std::size_t ruined = 0;
  double horizon = 0.0;
  std::uint64_t seed = 0;
  std::string generator = kMcGenerator;
};

/// Finite-horizon ruin frequency; surplus checked at claim epochs only.
McEstimate simulate_ruin(const ModelParams& model, double u, double horizon, std::size_t n_paths, std::uint64_t seed,
                         ExecPolicy policy = ExecPolicy::parallel);

/// Same paths serve every initial surplus: path i is ruined from u exactly when
/// the running minimum of c t - S(t) drops below -u.
std::vector<McEstimate> simulate_ruin_multi(const ModelParams& model, std::span<const double> us, double horizon,
                                            std::size_t n_paths, std::uint64_t seed,
                                            ExecPolicy policy = ExecPolicy::parallel);

struct AdaptiveMcResult {
  std::vector<McEstimate> estimates;
  std::vector<double> horizons;  // every horizon simulated
  bool stable = false;           // last doubling moved every estimate by less than 1 sigma
};

/// Doubles the horizon, continuing the same paths, until every estimate
/// changes by less than one standard error or max_horizon is reached.
AdaptiveMcResult simulate_ruin_adaptive(const ModelParams& model, std::span<const double> us, std::size_t n_paths,
                                        std::uint64_t seed, double initial_horizon, double max_horizon,
                                        ExecPolicy policy = ExecPolicy::parallel);

/// Starting horizon heuristic: 50 E[X] / theta.
double default_horizon(const ModelParams& model);

}  // namespace ruinrk
