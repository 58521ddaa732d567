#include "ruinrk/mc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ruinrk/errors.hpp"

namespace ruinrk {

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double SplitMix64::uniform_open0() { return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53; }

double sample_claim(const ClaimDistribution& claims, SplitMix64& rng) {
  if (const auto* g = claims.get_if<Gamma2>()) {
    return -std::log(rng.uniform_open0() * rng.uniform_open0()) / g->beta;
  }
  if (const auto* e = claims.get_if<Exponential>()) return -std::log(rng.uniform_open0()) / e->beta;
  const auto* p = claims.get_if<ParetoLomax>();
  const double v = rng.uniform_open0();
  const double m = p->m;
  if (p->m == 1) return 1.0 / std::sqrt(v) - 1.0;
  return m * (std::pow(v, -1.0 / (m + 1.0)) - 1.0);
}

namespace {

struct PathState {
  SplitMix64 rng{0};
  double t = 0.0;
  double level = 0.0;    // c t - S(t) after the last claim
  double minimum = std::numeric_limits<double>::infinity();
};

class PathEnsemble {
 public:
  PathEnsemble(const ModelParams& model, std::size_t n_paths, std::uint64_t seed, double stop_below)
      : model_(model), stop_below_(stop_below), paths_(n_paths) {
    // Path states are outputs of a seeding generator. Seeding with
    // seed + i*gamma would make path i+1 replay path i shifted by one draw.
    SplitMix64 seeder(seed);
    for (auto& p : paths_) p.rng = SplitMix64(seeder.next());
  }

  // Simulates every path up to `horizon`. A path whose minimum fell below
  // stop_below is ruined for every requested u and is not continued.
  void advance(double horizon, ExecPolicy policy) {
    const double lambda = model_.lambda();
    const double c = model_.premium_rate();
    const ClaimDistribution& claims = model_.claims();
    const auto n = static_cast<long long>(paths_.size());
    auto run = [&](PathState& p) {
      while (p.minimum >= stop_below_) {
        // Peek the next arrival; keep the generator state if it lies beyond
        // the horizon so a later extension replays the same path.
        SplitMix64 saved = p.rng;
        const double dt = -std::log(p.rng.uniform_open0()) / lambda;
        if (p.t + dt > horizon) {
          p.rng = saved;
          break;
        }
        p.t += dt;
        p.level += c * dt - sample_claim(claims, p.rng);
        p.minimum = std::min(p.minimum, p.level);
      }
    };
    if (policy == ExecPolicy::parallel) {
#pragma omp parallel for schedule(dynamic, 256)
      for (long long i = 0; i < n; ++i) run(paths_[static_cast<std::size_t>(i)]);
    } else {
      for (auto& p : paths_) run(p);
    }
  }

  std::vector<McEstimate> estimates(std::span<const double> us, double horizon, std::uint64_t seed) const {
    std::vector<McEstimate> out;
    for (double u : us) {
      McEstimate e;
      e.u = u;
      e.n_paths = paths_.size();
      e.horizon = horizon;
      e.seed = seed;
      for (const PathState& p : paths_) e.ruined += (p.minimum < -u) ? 1 : 0;
      e.estimate = static_cast<double>(e.ruined) / static_cast<double>(e.n_paths);
      e.std_error = std::sqrt(e.estimate * (1.0 - e.estimate) / static_cast<double>(e.n_paths));
      out.push_back(e);
    }
    return out;
  }

 private:
  ModelParams model_;
  double stop_below_;
  std::vector<PathState> paths_;
};

void check_inputs(std::span<const double> us, double horizon, std::size_t n_paths) {
  if (n_paths == 0) throw DomainError("Monte Carlo needs at least one path");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw DomainError("horizon must be positive and finite");
  if (us.empty()) throw DomainError("no initial surplus given");
  for (double u : us) {
    if (!(u >= 0.0) || !std::isfinite(u)) throw DomainError("initial surplus must be non-negative");
  }
}

}  // namespace

std::vector<McEstimate> simulate_ruin_multi(const ModelParams& model, std::span<const double> us, double horizon,
                                            std::size_t n_paths, std::uint64_t seed, ExecPolicy policy) {
  check_inputs(us, horizon, n_paths);
  PathEnsemble ens(model, n_paths, seed, -*std::max_element(us.begin(), us.end()));
  ens.advance(horizon, policy);
  return ens.estimates(us, horizon, seed);
}

McEstimate simulate_ruin(const ModelParams& model, double u, double horizon, std::size_t n_paths, std::uint64_t seed,
                         ExecPolicy policy) {
  const double us[] = {u};
  return simulate_ruin_multi(model, us, horizon, n_paths, seed, policy).front();
}

AdaptiveMcResult simulate_ruin_adaptive(const ModelParams& model, std::span<const double> us, std::size_t n_paths,
                                        std::uint64_t seed, double initial_horizon, double max_horizon,
                                        ExecPolicy policy) {
  check_inputs(us, initial_horizon, n_paths);
  if (!(max_horizon >= initial_horizon)) throw DomainError("max horizon below the initial horizon");
  PathEnsemble ens(model, n_paths, seed, -*std::max_element(us.begin(), us.end()));
  AdaptiveMcResult result;
  double horizon = initial_horizon;
  ens.advance(horizon, policy);
  result.horizons.push_back(horizon);
  result.estimates = ens.estimates(us, horizon, seed);
  while (horizon * 2.0 <= max_horizon) {
    horizon *= 2.0;
    ens.advance(horizon, policy);
    result.horizons.push_back(horizon);
    std::vector<McEstimate> next = ens.estimates(us, horizon, seed);
    bool stable = true;
    for (std::size_t i = 0; i < next.size(); ++i) {
      if (std::abs(next[i].estimate - result.estimates[i].estimate) >= std::max(next[i].std_error, 1e-300)) {
        stable = false;
      }
    }
    result.estimates = std::move(next);
    if (stable) {
      result.stable = true;
      break;
    }
  }
  return result;
}

double default_horizon(const ModelParams& model) { return 50.0 * model.claims().mean() / model.theta(); }

}  // namespace ruinrk
