#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <vector>

#include "ruinrk/app/config.hpp"
#include "ruinrk/app/output.hpp"

namespace ruinrk::app {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitSolver = 3;
inline constexpr int kExitTolerance = 4;

struct OutputOptions {
  Format format = Format::csv;
  std::optional<std::filesystem::path> out;
  bool quiet = false;
};

/// Each command builds its report, emits it and returns the exit status.
/// Configuration problems throw ConfigError (status 2), solver failures throw
/// StepFailure/Error (status 3).
struct CommandResult {
  Report report;
  int status = kExitOk;
};

CommandResult cmd_solve(const RunConfig& config);

CommandResult cmd_table(int which, const std::filesystem::path& data_dir, int q = 2,
                        ExecPolicy policy = ExecPolicy::parallel);

CommandResult cmd_converge(const RunConfig& config, const std::vector<double>& h_list);

struct McCheckOptions {
  std::size_t n_paths = 1'000'000;
  double horizon = 0.0;  // 0: start from the default horizon and double until stable
  double max_horizon = 12800.0;
};

CommandResult cmd_mc_check(const RunConfig& config, const McCheckOptions& mc);

/// Maps the exception currently being handled to an exit status and writes
/// the message to stderr.
int report_exception(bool quiet);

}  // namespace ruinrk::app
