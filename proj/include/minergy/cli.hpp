#pragma once

// Command implementations behind the `minergy` binary. Each runner takes a
// plain argument struct plus output/error streams and returns a process exit
// code, so the commands are usable (and testable) without a real process:
//   0  success
//   1  invalid input (bad file, bad flags, bad numbers)
//   2  result not certified optimal (solve/sinr-schedule) or solver/oracle
//      disagreement (oracle)
//   3  instance too large for exhaustive enumeration
//
// All numeric output uses 12 significant digits, so identical inputs produce
// byte-identical output across runs.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "core.hpp"
#include "graphs.hpp"
#include "io.hpp"
#include "oracle.hpp"
#include "sinr.hpp"
#include "solution.hpp"
#include "solver.hpp"
#include "thresholds.hpp"

namespace minergy {
namespace cli {

constexpr int kOk = 0;
constexpr int kInputError = 1;
constexpr int kUncertified = 2;
constexpr int kTooLarge = 3;

/// Largest instance the exhaustive enumeration commands accept; the
/// MINERGY_ORACLE_CAP environment variable overrides the default of 8.
inline int resolve_oracle_cap() {
  if (const char* env = std::getenv("MINERGY_ORACLE_CAP")) {
    int v = 0;
    if (minergy::detail::parse_int(env, v) && v >= 1) return v;
  }
  return 8;
}

inline const char* yesno(bool b) { return b ? "yes" : "no"; }

inline const char* status_name(LambdaEntry::Status s) {
  switch (s) {
    case LambdaEntry::Status::ok: return "ok";
    case LambdaEntry::Status::degenerate: return "degenerate";
    default: return "parallel";
  }
}

template <typename Fn>
inline int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const TooLarge& e) {
    err << "error: " << e.what() << "\n";
    return kTooLarge;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
}

/// Parses "mono:a" or "twoterm:a,b,lambda".
inline GainModel parse_gain_spec(const std::string& spec) {
  const auto bad = [&spec]() -> ParseError {
    return ParseError("gain spec must be 'mono:a' or 'twoterm:a,b,lambda' (got '" + spec + "')");
  };
  const std::size_t colon = spec.find(':');
  if (colon == std::string::npos) throw bad();
  const std::string head = spec.substr(0, colon);
  std::vector<double> vals;
  std::string rest = spec.substr(colon + 1);
  std::size_t pos = 0;
  while (pos <= rest.size()) {
    const std::size_t comma = rest.find(',', pos);
    const std::string part =
        rest.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    double v = 0.0;
    if (!minergy::detail::parse_double(part, v)) throw bad();
    vals.push_back(v);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (head == "mono" && vals.size() == 1) return GainModel::power_law(vals[0]);
  if (head == "twoterm" && vals.size() == 3)
    return GainModel::inverse_two_term(vals[0], vals[1], vals[2]);
  throw bad();
}

/// Parses "LO:HI" into an inclusive interval.
inline std::pair<double, double> parse_range(const std::string& spec) {
  const std::size_t colon = spec.find(':');
  double lo = 0.0, hi = 0.0;
  if (colon == std::string::npos ||
      !minergy::detail::parse_double(spec.substr(0, colon), lo) ||
      !minergy::detail::parse_double(spec.substr(colon + 1), hi))
    throw ParseError("range must be 'LO:HI' (got '" + spec + "')");
  return {lo, hi};
}

struct ModelFlags {
  std::optional<double> a, b, lambda;
};

inline CostModel model_from_flags(const ModelFlags& f) {
  if (!f.a) throw ParseError("--a is required");
  if (f.b.has_value() != f.lambda.has_value())
    throw ParseError("--b and --lambda must be given together");
  if (f.b) return CostModel::two_term(*f.a, *f.b, *f.lambda);
  return CostModel::monomial(*f.a);
}

// ---------------------------------------------------------------- solve ----

struct SolveArgs {
  std::string instance;
  ModelFlags model;
  std::string gain;  // empty means no radio layer
  double p0 = 1.0;
  double n0 = 1.0;
  double log_base = 2.0;
  double tol = 1e-12;
};

inline void print_solution(const Solution& sol, std::ostream& out) {
  out << "graph: " << sol.graph.label() << "\n";
  out << "energy: " << detail::num(sol.energy) << "\n";
  out << "certified: " << yesno(sol.certified) << "\n";
  out << "regime: " << sol.regime << "\n";
  if (!sol.ties.empty()) {
    out << "ties:";
    for (const auto& g : sol.ties) out << " " << g.label();
    out << "\n";
  }
  const auto edges = sol.flow.edges();
  out << "flow: " << edges.size() << " edges\n";
  for (const auto& e : edges)
    out << e.from << " -> " << e.to << ": " << detail::num(e.amount) << "\n";
}

inline int run_solve(const SolveArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() -> int {
    const NetworkInstance inst = load_instance(args.instance);
    SolveOptions opts;
    opts.root_tol = args.tol;
    opts.oracle_cap = resolve_oracle_cap();
    std::string header = "instance: N=" + std::to_string(inst.size()) + "\n";
    Solution sol;
    if (!args.gain.empty()) {
      if (args.model.a || args.model.b || args.model.lambda)
        throw ParseError("--gain cannot be combined with --a/--b/--lambda");
      const GainModel gain = parse_gain_spec(args.gain);
      const RadioParams params(args.p0, args.n0, gain, args.log_base);
      const ReducedFlowProblem red = reduce_to_flow(inst, params);
      header += "gain: " + gain.describe() + "\n";
      header += "p0: " + detail::num(params.p0) + "\n";
      header += "n0: " + detail::num(params.n0) + "\n";
      header += "c0: " + detail::num(red.c0) + "\n";
      header += "model: " + red.cost.describe() + "\n";
      sol = solve_model(red.instance, red.cost, opts);
    } else {
      const CostModel model = model_from_flags(args.model);
      header += "model: " + model.describe() + "\n";
      sol = solve_model(inst, model, opts);
    }
    out << header;
    print_solution(sol, out);
    return sol.certified ? kOk : kUncertified;
  });
}

// ----------------------------------------------------------- thresholds ----

struct ThresholdArgs {
  std::string instance;
  std::optional<double> a, b;
  double tol = 1e-12;
};

inline int run_thresholds(const ThresholdArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() -> int {
    const NetworkInstance inst = load_instance(args.instance);
    if (args.a.has_value() != args.b.has_value())
      throw ParseError("--a and --b must be given together for lambda thresholds");
    const ThresholdTable table = args.a ? lambda_table(inst, *args.a, *args.b, args.tol)
                                        : build_threshold_table(inst, args.tol);
    out << "kind,k,value,residual,status\n";
    for (int k = 1; k <= table.n_prime(); ++k)
      out << "a_k," << k << "," << detail::num(table.a_root(k)) << ","
          << detail::num(table.residual(k)) << ",ok\n";
    for (const auto& e : table.lambda_entries())
      out << e.kind << "," << e.k << "," << detail::num(e.value) << ","
          << detail::num(e.residual) << "," << status_name(e.status) << "\n";
    return kOk;
  });
}

// ---------------------------------------------------------------- sweep ----

struct SweepArgs {
  std::string instance;
  ModelFlags model;
  std::string a_range;       // "LO:HI", sweeps the leading exponent
  std::string lambda_range;  // "LO:HI", sweeps the two-term weight
  double step = 0.0;
  double tol = 1e-12;
};

inline int run_sweep(const SweepArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() -> int {
    const NetworkInstance inst = load_instance(args.instance);
    const bool sweep_a = !args.a_range.empty();
    const bool sweep_lambda = !args.lambda_range.empty();
    if (sweep_a == sweep_lambda)
      throw ParseError("exactly one of --a-range / --lambda-range is required");
    if (!(args.step > 0.0)) throw ParseError("--step must be positive");
    const auto [lo, hi] = parse_range(sweep_a ? args.a_range : args.lambda_range);
    if (!(lo <= hi))
      throw ParseError("empty range: " + detail::num(lo) + " > " + detail::num(hi));
    if (sweep_lambda && (!args.model.a || !args.model.b))
      throw ParseError("--lambda-range requires --a and --b");
    if (sweep_a && args.model.b.has_value() != args.model.lambda.has_value())
      throw ParseError("--b and --lambda must be given together");
    SolveOptions opts;
    opts.root_tol = args.tol;
    opts.oracle_cap = resolve_oracle_cap();
    const double points = std::floor((hi - lo) / args.step + 1e-9) + 1.0;
    if (!(points <= 1000000.0)) throw ParseError("sweep grid too large (over 1000000 points)");
    out << "param,graph,energy,certified\n";
    for (long i = 0; i < static_cast<long>(points); ++i) {
      const double v = lo + static_cast<double>(i) * args.step;
      try {
        const CostModel model =
            sweep_a ? (args.model.b ? CostModel::two_term(v, *args.model.b, *args.model.lambda)
                                    : CostModel::monomial(v))
                    : CostModel::two_term(*args.model.a, *args.model.b, v);
        const Solution sol = solve_model(inst, model, opts);
        out << detail::num(v) << "," << sol.graph.label() << "," << detail::num(sol.energy)
            << "," << yesno(sol.certified) << "\n";
      } catch (const std::exception& e) {
        throw ParseError("at param=" + detail::num(v) + ": " + e.what());
      }
    }
    return kOk;
  });
}

// --------------------------------------------------------------- oracle ----

struct OracleArgs {
  std::string instance;
  ModelFlags model;
  double tol = 1e-12;
};

inline int run_oracle(const OracleArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() -> int {
    const NetworkInstance inst = load_instance(args.instance);
    const CostModel model = model_from_flags(args.model);
    OracleOptions oopts;
    oopts.cap = resolve_oracle_cap();
    const OracleResult res = oracle_min(inst, model, oopts);
    SolveOptions sopts;
    sopts.root_tol = args.tol;
    sopts.oracle_cap = oopts.cap;
    const Solution sol = solve_model(inst, model, sopts);
    out << "trees: " << res.tree_count << "\n";
    out << "minimum: " << detail::num(res.min_energy) << "\n";
    out << "co-optimal: " << res.argmin.size() << "\n";
    const std::size_t shown = std::min<std::size_t>(res.argmin.size(), 20);
    for (std::size_t i = 0; i < shown; ++i) {
      const auto fam = match_family(inst, res.argmin[i].hops);
      out << "argmin: " << (fam ? fam->label() : res.argmin[i].label()) << "\n";
    }
    if (res.argmin.size() > shown) out << "argmin: (" << res.argmin.size() - shown << " more)\n";
    out << "solver: energy=" << detail::num(sol.energy) << " graph=" << sol.graph.label()
        << " certified=" << yesno(sol.certified) << "\n";
    const double scale = std::max({1.0, std::fabs(res.min_energy), std::fabs(sol.energy)});
    const bool agree = std::fabs(res.min_energy - sol.energy) <= 1e-9 * scale;
    out << "agreement: " << yesno(agree) << "\n";
    return agree ? kOk : kUncertified;
  });
}

// -------------------------------------------------------- sinr-schedule ----

struct SinrArgs {
  std::string instance;
  std::string gain;  // required
  double p0 = 1.0;
  double n0 = 1.0;
  double log_base = 2.0;
  double tol = 1e-12;
};

inline int run_sinr_schedule(const SinrArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() -> int {
    const NetworkInstance inst = load_instance(args.instance);
    if (args.gain.empty()) throw ParseError("--gain is required");
    const GainModel gain = parse_gain_spec(args.gain);
    const RadioParams params(args.p0, args.n0, gain, args.log_base);
    SolveOptions opts;
    opts.root_tol = args.tol;
    opts.oracle_cap = resolve_oracle_cap();
    const Solution sol = solve_model(inst, gain.attenuation(), opts);
    const Schedule sched = make_schedule(inst, params, sol.flow);
    out << "sender,receiver,start,end,rate,amount,slot_energy\n";
    for (const auto& s : sched.slots)
      out << s.sender << "," << s.receiver << "," << detail::num(s.start) << ","
          << detail::num(s.end) << "," << detail::num(s.rate) << "," << detail::num(s.amount)
          << "," << detail::num(s.energy) << "\n";
    out << "# graph: " << sol.graph.label() << "\n";
    out << "# c0: " << detail::num(sched.c0) << "\n";
    out << "# total_energy: " << detail::num(sched.total_energy) << "\n";
    out << "# certified: " << yesno(sol.certified) << "\n";
    return sol.certified ? kOk : kUncertified;
  });
}

}  // namespace cli
}  // namespace minergy
