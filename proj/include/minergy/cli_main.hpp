#pragma once

// Command-line front end: flag definitions and dispatch for the `minergy`
// binary. Kept separate from cli.hpp so library users do not pull in CLI11.

#include <CLI11.hpp>

#include <algorithm>
#include <iostream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "cli.hpp"

namespace minergy {
namespace cli {

namespace detail_cli {

/// Wraps a raw double flag so absence is observable after parsing. The
/// object must stay put once attached: CLI11 binds to `value`'s address.
struct OptFlag {
  double value = 0.0;
  CLI::Option* opt = nullptr;

  OptFlag() = default;
  OptFlag(const OptFlag&) = delete;
  OptFlag& operator=(const OptFlag&) = delete;

  void attach(CLI::App* cmd, const std::string& name, const std::string& help) {
    opt = cmd->add_option(name, value, help);
  }

  std::optional<double> get() const {
    if (opt != nullptr && opt->count() > 0) return value;
    return std::nullopt;
  }
};

}  // namespace detail_cli

/// Parses `args` (program name excluded, natural order) and runs the chosen
/// command, writing to the given streams. Returns the process exit code.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"minimum-energy data routing in one-dimensional sensor chains"};
  app.require_subcommand(1);
  int code = kOk;

  // solve
  auto* solve = app.add_subcommand("solve", "solve one instance and print the routing");
  SolveArgs sv;
  detail_cli::OptFlag sv_a, sv_b, sv_lambda;
  solve->add_option("instance", sv.instance, "instance file")->required();
  sv_a.attach(solve, "--a", "leading cost exponent");
  sv_b.attach(solve, "--b", "secondary cost exponent");
  sv_lambda.attach(solve, "--lambda", "weight of the secondary term");
  solve->add_option("--gain", sv.gain, "gain spec: mono:a or twoterm:a,b,lambda");
  solve->add_option("--p0", sv.p0, "transmit power (gain runs)");
  solve->add_option("--n0", sv.n0, "noise floor (gain runs)");
  solve->add_option("--log-base", sv.log_base, "capacity logarithm base (gain runs)");
  solve->add_option("--tol", sv.tol, "root-finding residual tolerance");
  solve->callback([&] {
    sv.model = {sv_a.get(), sv_b.get(), sv_lambda.get()};
    code = run_solve(sv, out, err);
  });

  // thresholds
  auto* thresholds =
      app.add_subcommand("thresholds", "print the exponent roots and lambda crossovers as CSV");
  ThresholdArgs th;
  detail_cli::OptFlag th_a, th_b;
  thresholds->add_option("instance", th.instance, "instance file")->required();
  th_a.attach(thresholds, "--a", "leading cost exponent");
  th_b.attach(thresholds, "--b", "secondary cost exponent");
  thresholds->add_option("--tol", th.tol, "root-finding residual tolerance");
  thresholds->callback([&] {
    th.a = th_a.get();
    th.b = th_b.get();
    code = run_thresholds(th, out, err);
  });

  // sweep
  auto* sweep = app.add_subcommand("sweep", "solve across a parameter grid and print CSV");
  SweepArgs sw;
  detail_cli::OptFlag sw_a, sw_b, sw_lambda;
  sweep->add_option("instance", sw.instance, "instance file")->required();
  sw_a.attach(sweep, "--a", "leading cost exponent");
  sw_b.attach(sweep, "--b", "secondary cost exponent");
  sw_lambda.attach(sweep, "--lambda", "weight of the secondary term");
  sweep->add_option("--a-range", sw.a_range, "sweep the leading exponent over LO:HI");
  sweep->add_option("--lambda-range", sw.lambda_range, "sweep the two-term weight over LO:HI");
  sweep->add_option("--step", sw.step, "grid step (required, positive)");
  sweep->add_option("--tol", sw.tol, "root-finding residual tolerance");
  sweep->callback([&] {
    sw.model = {sw_a.get(), sw_b.get(), sw_lambda.get()};
    code = run_sweep(sw, out, err);
  });

  // oracle
  auto* oracle =
      app.add_subcommand("oracle", "exhaustively enumerate routing trees and check the solver");
  OracleArgs oc;
  detail_cli::OptFlag oc_a, oc_b, oc_lambda;
  oracle->add_option("instance", oc.instance, "instance file")->required();
  oc_a.attach(oracle, "--a", "leading cost exponent");
  oc_b.attach(oracle, "--b", "secondary cost exponent");
  oc_lambda.attach(oracle, "--lambda", "weight of the secondary term");
  oracle->add_option("--tol", oc.tol, "root-finding residual tolerance");
  oracle->callback([&] {
    oc.model = {oc_a.get(), oc_b.get(), oc_lambda.get()};
    code = run_oracle(oc, out, err);
  });

  // sinr-schedule
  auto* sinr = app.add_subcommand(
      "sinr-schedule", "solve under a gain model and print an interference-free TDMA schedule");
  SinrArgs sn;
  sinr->add_option("instance", sn.instance, "instance file")->required();
  sinr->add_option("--gain", sn.gain, "gain spec: mono:a or twoterm:a,b,lambda")->required();
  sinr->add_option("--p0", sn.p0, "transmit power");
  sinr->add_option("--n0", sn.n0, "noise floor");
  sinr->add_option("--log-base", sn.log_base, "capacity logarithm base");
  sinr->add_option("--tol", sn.tol, "root-finding residual tolerance");
  sinr->callback([&] { code = run_sinr_schedule(sn, out, err); });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    const int c = app.exit(e, out, err);
    return c == 0 ? kOk : kInputError;
  }
  return code;
}

inline int run_cli(int argc, char** argv) {
  std::vector<std::string> args;
  args.reserve(argc > 0 ? static_cast<std::size_t>(argc - 1) : 0);
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace cli
}  // namespace minergy
