// skelet17 — tiered simulator and verifier for the Skelet #17 counter
// process.
//
// Subcommands:
//   run     advance the process from a state or an epoch seed
//   verify  run the property suites
//   epoch   produce an epoch certificate (JSON)
//   ncurve  export the n curve of one transit as CSV
//
// Exit codes: 0 success/pass, 1 verification failure, 2 Halt encountered,
// 3 invalid input, 4 internal error (overflow or broken invariant).

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "skelet17/accel.hpp"
#include "skelet17/epoch.hpp"
#include "skelet17/io.hpp"
#include "skelet17/machine.hpp"
#include "skelet17/verify.hpp"

namespace {

using namespace skelet17;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitHalt = 2;
constexpr int kExitBadInput = 3;
constexpr int kExitInternal = 4;

struct RunArgs {
  std::string start;
  std::string tier = "t3";
  long long steps = 1'000'000;
  std::string trace_path;
  bool full_states = false;
  bool no_check = false;
};

struct VerifyArgs {
  std::string suite = "all";
  int k_max = 3;
  bool json = false;
};

struct EpochArgs {
  int k = 1;
  std::string tier = "t3";
  std::string out_path;
  bool no_check = false;
};

struct NCurveArgs {
  std::string state;
  std::string out_path;
};

void print_state_line(std::ostream& os, const State& s) {
  const StateVars v = state_vars(s);
  os << "state: " << s.to_string() << "\n"
     << "vars: n=" << v.n << " ell=" << v.ell << " sigma="
     << (v.sigma > 0 ? "+1" : "-1") << "\n";
}

std::optional<int> parse_seed(const std::string& start) {
  if (start.rfind("k=", 0) != 0) return std::nullopt;
  try {
    std::size_t used = 0;
    const int k = std::stoi(start.substr(2), &used);
    if (used != start.size() - 2 || k < 1) {
      throw std::invalid_argument("epoch seed must be k=<positive integer>");
    }
    return k;
  } catch (const std::exception&) {
    throw std::invalid_argument("epoch seed must be k=<positive integer>");
  }
}

int cmd_run(const RunArgs& args) {
  const std::optional<Tier> tier = tier_from_name(args.tier);
  if (!tier) throw std::invalid_argument("unknown tier '" + args.tier + "'");
  if (args.steps < 0) throw std::invalid_argument("--steps must be >= 0");

  std::optional<int> seed_k = parse_seed(args.start);
  if (!seed_k && (*tier == Tier::kT2 || *tier == Tier::kT3)) {
    // The cursor tiers only run whole epochs; accept a literal S_k too.
    const State s = State::parse(args.start);
    if (s.ell() % 2 == 1 && s == start_state((s.ell() - 1) / 2)) {
      seed_k = (s.ell() - 1) / 2;
    } else {
      throw std::invalid_argument(
          "tiers t2/t3 run whole epochs; use --start k=N or pick t0/t1");
    }
  }

  if (seed_k) {
    const EpochReport report = run_epoch(*seed_k, *tier, !args.no_check);
    print_state_line(std::cout, report.s_next);
    std::cout << "overflows: " << report.overflow_count << "\n"
              << "nprime_total: " << report.nprime_total << "\n";
    if (report.naive_step_total) {
      std::cout << "steps: " << *report.naive_step_total << "\n";
    }
    return kExitOk;
  }

  const State start = State::parse(args.start);
  if (*tier == Tier::kT0) {
    std::ofstream trace_file;
    std::optional<JsonlTraceWriter> writer;
    if (!args.trace_path.empty()) {
      trace_file.open(args.trace_path);
      if (!trace_file) {
        throw std::invalid_argument("cannot open trace file " +
                                    args.trace_path);
      }
      if (args.full_states) {
        writer.emplace(trace_file, static_cast<std::size_t>(-1));
      } else {
        writer.emplace(trace_file);
      }
    }
    const RunOutcome out =
        run_naive(start, args.steps, writer ? &*writer : nullptr);
    print_state_line(std::cout, out.state);
    std::cout << "steps: " << out.steps_done
              << " (overflow=" << out.counts.overflow
              << " zero=" << out.counts.zero << " halve=" << out.counts.halve
              << " increment=" << out.counts.increment << ")\n";
    if (out.halted) {
      std::cout << "halted: yes\n";
      return kExitHalt;
    }
    return kExitOk;
  }

  // T1: rule events with batched increment runs.
  if (!args.trace_path.empty()) {
    throw std::invalid_argument("per-step traces require --tier t0");
  }
  State cur = start;
  long long steps_used = 0;
  RuleCounts counts;
  while (steps_used < args.steps) {
    const std::optional<RuleEvent> ev = advance_event(cur, TransitOptions{});
    if (!ev) {
      print_state_line(std::cout, cur);
      std::cout << "halted: yes\n";
      return kExitHalt;
    }
    steps_used += ev->count;
    switch (ev->rule) {
      case Rule::kOverflow:  ++counts.overflow; break;
      case Rule::kZero:      ++counts.zero; break;
      case Rule::kHalve:     ++counts.halve; break;
      case Rule::kIncrement: counts.increment += ev->count; break;
      case Rule::kHalt:      break;
    }
  }
  print_state_line(std::cout, cur);
  std::cout << "steps: " << steps_used << " (overflow=" << counts.overflow
            << " zero=" << counts.zero << " halve=" << counts.halve
            << " increment=" << counts.increment << ")\n";
  return kExitOk;
}

int cmd_verify(const VerifyArgs& args) {
  std::vector<SuiteResult> results;
  if (args.suite == "all") {
    results = suite_all(args.k_max);
  } else {
    results.push_back(run_suite(args.suite, args.k_max));
  }

  bool all_passed = true;
  for (const SuiteResult& r : results) {
    all_passed = all_passed && r.passed();
    std::cerr << "suite " << r.name << " finished in " << r.elapsed_sec
              << "s\n";
  }
  if (args.json) {
    std::cout << suite_results_json(results);
  } else {
    for (const SuiteResult& r : results) print_suite_result(std::cout, r);
  }
  return all_passed ? kExitOk : kExitVerifyFailed;
}

int cmd_epoch(const EpochArgs& args) {
  const std::optional<Tier> tier = tier_from_name(args.tier);
  if (!tier) throw std::invalid_argument("unknown tier '" + args.tier + "'");
  const EpochReport report = run_epoch(args.k, *tier, !args.no_check);
  const std::string json = epoch_report_json(report);
  if (!args.out_path.empty()) {
    std::ofstream out(args.out_path);
    if (!out) {
      throw std::invalid_argument("cannot open output file " + args.out_path);
    }
    out << json;
    std::cout << "epoch k=" << report.k << " tier=" << tier_name(*tier)
              << " s_next=" << report.s_next.to_string()
              << " overflows=" << report.overflow_count << "\n";
  } else {
    std::cout << json;
  }
  return kExitOk;
}

int cmd_ncurve(const NCurveArgs& args) {
  const State s = State::parse(args.state);
  std::ofstream out(args.out_path);
  if (!out) {
    throw std::invalid_argument("cannot open output file " + args.out_path);
  }
  const TransitSummary t = write_ncurve_csv(out, s);
  std::cout << "ncurve: " << t.step_count << " steps, successor "
            << t.successor.to_string() << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tiered simulator and verifier for the Skelet #17 counter "
               "process"};
  app.require_subcommand(1);

  RunArgs run_args;
  CLI::App* run = app.add_subcommand(
      "run", "Advance the process from a state or an epoch seed");
  run->add_option("--start", run_args.start,
                  "Start state \"a_ell,...,a_0\" or epoch seed \"k=N\"")
      ->required();
  run->add_option("--tier", run_args.tier, "t0|t1|t2|t3 (default t3)");
  run->add_option("--steps", run_args.steps,
                  "Step budget for t0/t1 state runs (default 1000000)");
  run->add_option("--trace", run_args.trace_path,
                  "Write a JSON Lines trace (t0 only)");
  run->add_flag("--full-states", run_args.full_states,
                "Never elide states from the trace");
  run->add_flag("--no-check", run_args.no_check,
                "Skip the cursor bound checks on epoch runs");

  VerifyArgs verify_args;
  CLI::App* verify =
      app.add_subcommand("verify", "Run the property suites");
  verify->add_option("--suite", verify_args.suite,
                     "Suite name (gray|table|incr|embanked|epoch|mutation) "
                     "or 'all'");
  verify->add_option("--k-max", verify_args.k_max,
                     "Epoch bound for the suites (default 3)");
  verify->add_flag("--json", verify_args.json, "Emit JSON instead of text");

  EpochArgs epoch_args;
  CLI::App* epoch_cmd =
      app.add_subcommand("epoch", "Produce an epoch certificate");
  epoch_cmd->add_option("--k", epoch_args.k, "Epoch index")->required();
  epoch_cmd->add_option("--tier", epoch_args.tier, "t0|t1|t2|t3 (default t3)");
  epoch_cmd->add_option("--out", epoch_args.out_path,
                        "Write the report JSON to this file");
  epoch_cmd->add_flag("--no-check", epoch_args.no_check,
                      "Skip the cursor bound checks");

  NCurveArgs ncurve_args;
  CLI::App* ncurve =
      app.add_subcommand("ncurve", "Export the n curve of one transit");
  ncurve->add_option("--state", ncurve_args.state, "An empty state")
      ->required();
  ncurve->add_option("--out", ncurve_args.out_path, "CSV output path")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitBadInput;
  }

  try {
    if (run->parsed()) return cmd_run(run_args);
    if (verify->parsed()) return cmd_verify(verify_args);
    if (epoch_cmd->parsed()) return cmd_epoch(epoch_args);
    if (ncurve->parsed()) return cmd_ncurve(ncurve_args);
  } catch (const HaltEncountered& e) {
    std::cerr << "halt: " << e.what() << "\n";
    return kExitHalt;
  } catch (const OverflowError& e) {
    std::cerr << "overflow: " << e.what() << "\n";
    return kExitInternal;
  } catch (const VerificationError& e) {
    std::cerr << "verification failure: " << e.what() << "\n";
    return kExitVerifyFailed;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitBadInput;
}
