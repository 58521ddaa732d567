// ruinrk: ruin probabilities for the classical risk model.
//
//   ruinrk solve --dist gamma2:beta=2.4 --theta 0.2 --method rk4-s13 --h 0.0016 --umax 10 --report 0:1:10
//   ruinrk table 3
//   ruinrk converge --dist exponential:beta=1 --theta 0.2 --method rk4-s13 --h-list 0.02,0.01,0.005
//   ruinrk mc-check --dist pareto:m=1 --theta 1 --method tsrk4-phl --h 0.01 --umax 20 --report 10,20
//
// Exit status: 0 success, 2 configuration error, 3 solver failure,
// 4 tolerance or acceptance failure.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ruinrk/app/commands.hpp"
#include "ruinrk/app/reference.hpp"
#include "ruinrk/errors.hpp"

namespace {

using namespace ruinrk;
using namespace ruinrk::app;

struct Args {
  std::string dist = "gamma2:beta=2.4";
  double theta = 0.2;
  double lambda = 1.0;
  std::string method = "rk4-s13";
  double h = 0.0016;
  double umax = 10.0;
  int q = 2;
  std::string report;
  std::string m2;
  std::string policy = "parallel";
  unsigned long long seed = 20240601;
};

void add_run_options(CLI::App* cmd, Args& a, bool with_h) {
  cmd->set_help_flag("--help", "Print this help message and exit");
  cmd->add_option("--dist", a.dist, "Claim law, e.g. gamma2:beta=2.4, pareto:m=1, exponential:beta=1");
  cmd->add_option("--theta", a.theta, "Safety loading (> 0)");
  cmd->add_option("--lambda", a.lambda, "Claim intensity; results depend only on lambda/c");
  cmd->add_option("--method", a.method, "rk4-s13 | tsrk4-g | tsrk4-phl | tsrk4-improper | tsrk6-g");
  if (with_h) cmd->add_option("--h", a.h, "Step size");
  cmd->add_option("--umax", a.umax, "Right end of the grid");
  cmd->add_option("--q", a.q, "Gauss points for the Pareto schemes (1..3)");
  cmd->add_option("--report", a.report, "Report points: comma list and start:step:stop ranges");
  cmd->add_option("--m2-coefficients", a.m2, "Coefficient file for tsrk6-g");
  cmd->add_option("--policy", a.policy, "History-sum kernels: serial | parallel");
}

RunConfig to_config(const Args& a) {
  RunConfig c;
  c.dist = a.dist;
  c.theta = a.theta;
  c.lambda = a.lambda;
  c.method = parse_method(a.method);
  c.h = a.h;
  c.u_max = a.umax;
  c.q = a.q;
  if (a.report.empty()) {
    c.report.clear();
    for (double u = 0.0; u <= a.umax + 1e-12; u += 1.0) c.report.push_back(u);
  } else {
    c.report = parse_points(a.report);
  }
  if (!a.m2.empty()) c.m2_coefficients = a.m2;
  if (a.policy == "serial") {
    c.policy = ExecPolicy::serial;
  } else if (a.policy != "parallel") {
    throw ConfigError("--policy must be serial or parallel");
  }
  c.seed = a.seed;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ruin probabilities by Runge-Kutta solvers of the ruin integro-differential equation"};
  // -h is taken by the step size.
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);
  std::string out;
  std::string format = "csv";
  bool quiet = false;
  app.add_option("--out", out, "Output file (default stdout)");
  app.add_option("--format", format, "csv | json");
  app.add_flag("--quiet", quiet, "Suppress diagnostics on stderr");

  Args solve_args;
  auto* solve = app.add_subcommand("solve", "Solve on a grid and report psi at chosen points");
  add_run_options(solve, solve_args, true);

  int which = 0;
  std::string data_dir;
  int table_q = 2;
  auto* table = app.add_subcommand("table", "Recompute a published table and compare");
  table->set_help_flag("--help", "Print this help message and exit");
  table->add_option("which", which, "1, 2 or 3")->required();
  table->add_option("--data-dir", data_dir, "Directory holding table1.csv .. table3.csv");
  table->add_option("--q", table_q, "Gauss points for the Pareto scheme");

  Args conv_args;
  std::string h_list;
  auto* converge = app.add_subcommand("converge", "Empirical convergence order over a list of step sizes");
  add_run_options(converge, conv_args, false);
  converge->add_option("--h-list", h_list, "Comma-separated step sizes")->required();

  Args mc_args;
  McCheckOptions mc;
  auto* mc_check = app.add_subcommand("mc-check", "Compare a deterministic solve with Monte Carlo");
  add_run_options(mc_check, mc_args, true);
  mc_check->add_option("--paths", mc.n_paths, "Number of simulated paths");
  mc_check->add_option("--horizon", mc.horizon, "Time horizon; 0 doubles from 50 E[X]/theta until stable");
  mc_check->add_option("--max-horizon", mc.max_horizon, "Largest horizon tried when doubling");
  mc_check->add_option("--seed", mc_args.seed, "Generator seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    if (!quiet) std::cerr << "ruinrk: configuration error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    OutputOptions opts;
    opts.format = parse_format(format);
    if (!out.empty()) opts.out = out;

    CommandResult result;
    if (*solve) {
      result = cmd_solve(to_config(solve_args));
    } else if (*table) {
      result = cmd_table(which, data_dir.empty() ? default_data_dir() : std::filesystem::path(data_dir), table_q);
    } else if (*converge) {
      RunConfig cfg = to_config(conv_args);
      result = cmd_converge(cfg, parse_points(h_list));
    } else {
      result = cmd_mc_check(to_config(mc_args), mc);
    }
    emit(result.report, opts.format, opts.out);
    if (result.status != kExitOk && !quiet) {
      std::cerr << "ruinrk: " << result.report.command << ": tolerance check failed\n";
    }
    return result.status;
  } catch (...) {
    return report_exception(quiet);
  }
}
