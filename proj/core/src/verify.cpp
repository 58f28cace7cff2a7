#include "skelet17/verify.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <optional>
#include <sstream>

namespace skelet17 {

namespace {

constexpr long long kGrayLimit = 1 << 16;
constexpr long long kDistLimit = 1 << 12;
constexpr int kDistMaxJ = 14;
constexpr int kMaxFailures = 32;  // stop flooding after this many records
constexpr long long kEpochStepBudget = 10'000'000;

using Clock = std::chrono::steady_clock;

class SuiteRun {
 public:
  explicit SuiteRun(std::string name) : start_(Clock::now()) {
    result_.name = std::move(name);
  }

  void add_case() { ++result_.cases; }

  bool fail(std::string input, std::string expected, std::string actual) {
    if (static_cast<int>(result_.failures.size()) < kMaxFailures) {
      result_.failures.push_back(
          {std::move(input), std::move(expected), std::move(actual)});
    }
    return false;
  }

  bool check(bool ok, const std::string& input, const std::string& expected,
             const std::string& actual) {
    add_case();
    if (!ok) return fail(input, expected, actual);
    return true;
  }

  bool saturated() const {
    return static_cast<int>(result_.failures.size()) >= kMaxFailures;
  }

  SuiteResult finish() {
    result_.elapsed_sec =
        std::chrono::duration<double>(Clock::now() - start_).count();
    return std::move(result_);
  }

 private:
  SuiteResult result_;
  Clock::time_point start_;
};

std::string vars_text(const StateVars& v) {
  return "(n=" + std::to_string(v.n) + ", ell=" + std::to_string(v.ell) +
         ", sigma=" + std::string(v.sigma > 0 ? "+1" : "-1") + ")";
}

// ---------------------------------------------------------------------------
// Table conformance, parameterized over the stepper so the mutation self-test
// can drive perturbed rule bodies through the identical checks.

using StepFn = std::function<std::optional<State>(const State&)>;

void run_table_conformance(SuiteRun& run, int k_max, const StepFn& fn) {
  for (int k = 1; k <= k_max; ++k) {
    State cur = start_state(k);
    const State target = start_state(k + 1);
    long long budget = kEpochStepBudget;
    while (cur != target) {
      if (run.saturated()) return;
      if (--budget < 0) {
        run.add_case();
        run.fail("epoch k=" + std::to_string(k),
                 "reach " + target.to_string() + " within budget",
                 "still at " + cur.to_string());
        break;
      }
      const Rule rule = classify(cur);
      const StateVars before = state_vars(cur);
      std::optional<State> next;
      try {
        next = fn(cur);
      } catch (const std::exception& e) {
        run.add_case();
        run.fail(cur.to_string() + " --" + rule_name(rule), "a next state",
                 std::string("exception: ") + e.what());
        break;
      }
      if (!next) {
        run.add_case();
        run.fail(cur.to_string(), "no Halt before S_" + std::to_string(k + 1),
                 "Halt");
        break;
      }
      const StateVars after = state_vars(*next);

      bool ok = true;
      std::string expected;
      switch (rule) {
        case Rule::kZero:
          expected = "pre n=0 sigma=-1; post n=2^ell-1, ell+2, sigma=-1";
          ok = before.n == 0 && before.sigma == -1 &&
               after.n == pow2(before.ell) - 1 &&
               after.ell == before.ell + 2 && after.sigma == -1;
          break;
        case Rule::kOverflow:
          expected = "pre n=2^ell-1 sigma=+1; post n=0, ell+1, sigma=-1";
          ok = before.n == pow2(before.ell) - 1 && before.sigma == +1 &&
               after.n == 0 && after.ell == before.ell + 1 &&
               after.sigma == -1;
          break;
        case Rule::kHalve:
          expected = "post n=floor(n/2), ell-1, sigma flipped";
          ok = after.n == before.n / 2 && after.ell == before.ell - 1 &&
               after.sigma == -before.sigma;
          break;
        case Rule::kIncrement:
          expected = "post n=n+sigma, ell and sigma fixed, entry 0 down by 1";
          ok = after.n == before.n + before.sigma &&
               after.ell == before.ell && after.sigma == before.sigma &&
               next->at(0) == cur.at(0) - 1;
          break;
        case Rule::kHalt:
          break;
      }
      if (!run.check(ok,
                     cur.to_string() + " --" + rule_name(rule) + "--> " +
                         next->to_string(),
                     expected, vars_text(before) + " -> " + vars_text(after))) {
        break;  // a broken rule floods; one record per epoch is enough
      }
      cur = std::move(*next);
    }
  }
}

// ---------------------------------------------------------------------------
// Deliberate single-rule perturbations for the self-test.

enum class Mutation {
  kIncrementBumpAtI,
  kIncrementKeepEntry0,
  kZeroKeepEntry0,
  kZeroSinglePad,
  kHalveDropLeading,
  kOverflowNoCarry,
};

const char* mutation_name(Mutation m) {
  switch (m) {
    case Mutation::kIncrementBumpAtI:    return "increment bumps i, not i+1";
    case Mutation::kIncrementKeepEntry0: return "increment keeps entry 0";
    case Mutation::kZeroKeepEntry0:      return "zero keeps entry 0";
    case Mutation::kZeroSinglePad:       return "zero pads one entry, not two";
    case Mutation::kHalveDropLeading:    return "halve drops the leading entry";
    case Mutation::kOverflowNoCarry:     return "overflow forgets the carry";
  }
  return "?";
}

std::optional<State> mutated_step(const State& s, Mutation m) {
  std::vector<Int> a = s.low_order();
  switch (classify(s)) {
    case Rule::kOverflow:
      if (m != Mutation::kOverflowNoCarry) a.back() += 1;
      a.push_back(0);
      break;
    case Rule::kHalt:
      return std::nullopt;
    case Rule::kZero:
      a.back() += 1;
      if (m != Mutation::kZeroKeepEntry0) a[0] -= 1;
      a.push_back(0);
      if (m != Mutation::kZeroSinglePad) a.push_back(0);
      break;
    case Rule::kHalve:
      if (m == Mutation::kHalveDropLeading) {
        a.pop_back();
      } else {
        a.erase(a.begin());
      }
      break;
    case Rule::kIncrement: {
      std::size_t i = 0;
      while ((a[i] & 1) == 0) ++i;
      const std::size_t hit = m == Mutation::kIncrementBumpAtI ? i : i + 1;
      a[hit] += 1;
      if (m != Mutation::kIncrementKeepEntry0) a[0] -= 1;
      break;
    }
  }
  return State::from_low_order(std::move(a));
}

std::string hpair_text(const HPair& p) {
  return "(" + std::to_string(p.first) + "," + std::to_string(p.second) + ")";
}

bool reports_equal(const EpochReport& x, const EpochReport& y) {
  return x.k == y.k && x.s_next == y.s_next &&
         x.kappa_total == y.kappa_total &&
         x.overflow_count == y.overflow_count &&
         x.landmarks == y.landmarks && x.nprime_total == y.nprime_total &&
         (!x.naive_step_total || !y.naive_step_total ||
          *x.naive_step_total == *y.naive_step_total);
}

std::string report_digest(const EpochReport& r) {
  std::ostringstream os;
  os << "s_next=" << r.s_next.to_string() << " kappa=[";
  for (std::size_t i = 0; i < r.kappa_total.size(); ++i) {
    os << (i ? "," : "") << r.kappa_total[i];
  }
  os << "] overflows=" << r.overflow_count << " nprime=" << r.nprime_total;
  for (const auto& [name, st] : r.landmarks) {
    os << ' ' << name << '=' << st.to_string();
  }
  return os.str();
}

}  // namespace

SuiteResult suite_table(int k_max) {
  if (k_max < 1) throw std::domain_error("suite_table requires k_max >= 1");
  SuiteRun run("table");
  run_table_conformance(run, k_max,
                        [](const State& s) { return step(s); });
  return run.finish();
}

SuiteResult suite_gray() {
  SuiteRun run("gray");
  constexpr int kDigits = 17;  // covers every n < 2^16
  std::vector<std::uint8_t> digits(kDigits), digits_next(kDigits);
  for (Int n = 0; n < kGrayLimit; ++n) {
    for (int i = 1; i <= kDigits; ++i) {
      digits[static_cast<std::size_t>(i - 1)] =
          static_cast<std::uint8_t>(gray_digit(n, i));
      digits_next[static_cast<std::size_t>(i - 1)] =
          static_cast<std::uint8_t>(gray_digit(n + 1, i));
    }

    const Int decoded = gray_decode(digits);
    if (!run.check(decoded == n, "n=" + std::to_string(n),
                   "decode(digits(n)) = n",
                   "decoded " + std::to_string(decoded))) {
      if (run.saturated()) return run.finish();
    }

    int flips = 0;
    for (int i = 0; i < kDigits; ++i) {
      flips += digits[static_cast<std::size_t>(i)] !=
               digits_next[static_cast<std::size_t>(i)];
    }
    run.check(flips == 1 && gray_digit(n, 0) != gray_digit(n + 1, 0),
              "n=" + std::to_string(n),
              "digits >= 1 flip exactly once and digit 0 always flips",
              std::to_string(flips) + " flips");

    bool shift_ok = true;
    for (int i = 1; i + 1 <= kDigits; ++i) {
      if (gray_digit(n / 2, i) != gray_digit(n, i + 1)) {
        shift_ok = false;
        break;
      }
    }
    run.check(shift_ok, "n=" + std::to_string(n),
              "dropping digit 1 gives the digits of floor(n/2)", "mismatch");
    if (run.saturated()) return run.finish();
  }

  for (Int n = 0; n < kDistLimit; ++n) {
    for (int j = 0; j <= kDistMaxJ; ++j) {
      const Int lhs = d_j(j + 1, n + 2, n);
      const Int rhs = d_j(j, n / 2 + 1, n / 2);
      run.check(lhs == rhs,
                "n=" + std::to_string(n) + " j=" + std::to_string(j),
                "d_{j+1}(n+2,n) = d_j(floor(n/2)+1,floor(n/2))",
                std::to_string(lhs) + " vs " + std::to_string(rhs));
      if (run.saturated()) return run.finish();
    }
  }
  return run.finish();
}

SuiteResult suite_incr(int k_max) {
  if (k_max < 1) throw std::domain_error("suite_incr requires k_max >= 1");
  SuiteRun run("incr");
  const TransitOptions verified{.batched = true, .verify_batches = true};
  const TransitOptions plain{};
  for (int k = 1; k <= k_max; ++k) {
    State cur = start_state(k);
    const State target = start_state(k + 1);
    while (cur != target && !run.saturated()) {
      const Rule rule = classify(cur);
      try {
        if (rule == Rule::kIncrement) {
          run.add_case();
          advance_event(cur, verified);  // throws on batch/step divergence
        } else {
          std::optional<RuleEvent> ev = advance_event(cur, plain);
          if (!ev) {
            run.add_case();
            run.fail(cur.to_string(), "no Halt inside an epoch", "Halt");
            break;
          }
        }
      } catch (const VerificationError& e) {
        run.fail(cur.to_string(), "batched run equals the stepped run",
                 e.what());
        break;
      }
    }
  }
  return run.finish();
}

SuiteResult suite_embanked(int k_max) {
  if (k_max < 1) throw std::domain_error("suite_embanked requires k_max >= 1");
  SuiteRun run("embanked");
  for (int k = 1; k <= k_max; ++k) {
    State cur = start_state(k);
    const State target = start_state(k + 1);

    // Transit of the epoch seed: observation only, no prediction available.
    TransitSummary t = next_empty(cur);
    run.check(t.embanked && t.bump_index.has_value(),
              cur.to_string(), "seed transit embanked with a single bump",
              "embanked=" + std::to_string(t.embanked));
    HPair h_prev = t.h();
    HPair s_prev = t.s();
    int last_bump = t.bump_index.value_or(-1);
    cur = t.successor;

    // Rooted span: predictions of the bump algebra against observations.
    while (weak_bounds(cur) && !run.saturated()) {
      int predicted = -1;
      if (last_bump >= 2) {
        predicted = last_bump - 2;
      } else {
        predicted = next_bump_index(last_bump, h_prev);
      }
      const auto [h_pred, s_pred] = h_after_bump(h_prev, s_prev, last_bump);

      t = next_empty(cur);
      run.check(weak_bounds(cur) == t.weakly_embanked, cur.to_string(),
                "bounds true <=> transit weakly embanked",
                "observed weakly_embanked=" +
                    std::to_string(t.weakly_embanked));
      run.check(t.embanked, cur.to_string(),
                "bounded bumped state has an embanked transit",
                "embanked=false");
      run.check(t.bump_index && *t.bump_index == predicted, cur.to_string(),
                "next bump at " + std::to_string(predicted),
                t.bump_index ? std::to_string(*t.bump_index) : "no bump");
      run.check(t.h() == h_pred && t.s() == s_pred, cur.to_string(),
                "h=" + hpair_text(h_pred) + " s=" + hpair_text(s_pred),
                "h=" + hpair_text(t.h()) + " s=" + hpair_text(t.s()));

      h_prev = t.h();
      s_prev = t.s();
      last_bump = t.bump_index.value_or(-1);
      cur = t.successor;
    }

    // Endgame span: the bounds and the observed shape must keep agreeing.
    while (cur != target && !run.saturated()) {
      const bool bounds = weak_bounds(cur);
      t = next_empty(cur);
      run.check(bounds == t.weakly_embanked, cur.to_string(),
                "bounds true <=> transit weakly embanked",
                "bounds=" + std::to_string(bounds) + " observed=" +
                    std::to_string(t.weakly_embanked));
      cur = t.successor;
    }
  }
  return run.finish();
}

SuiteResult suite_epoch(int k_max) {
  if (k_max < 1) throw std::domain_error("suite_epoch requires k_max >= 1");
  SuiteRun run("epoch");

  for (int k = 1; k <= std::min(k_max, 3); ++k) {
    const EpochReport t0 = run_epoch(k, Tier::kT0);
    for (Tier tier : {Tier::kT1, Tier::kT2, Tier::kT3}) {
      const EpochReport other = run_epoch(k, tier);
      run.check(reports_equal(t0, other),
                "k=" + std::to_string(k) + " t0 vs " + tier_name(tier),
                report_digest(t0), report_digest(other));
    }
    run.check(t0.overflow_count == 1, "k=" + std::to_string(k),
              "exactly one Overflow", std::to_string(t0.overflow_count));
  }

  // Segment jumps against iterated cascades, with the per-segment counting
  // and entry-delta laws.
  for (int k = 2; k <= std::min(k_max, 3); ++k) {
    RootedCursor c = seed_cursor(k);
    for (int i = 0; i < 4; ++i) c = nprime_step(c);
    const Int base = pow2(2 * k);
    Int m = 2;
    while (m < base - 2 && !run.saturated()) {
      const Int m_next = next_odd_val(m);
      const RootedCursor jumped = segment_jump(c, Segment(m, m_next));

      RootedCursor it = c;
      const HPair want{base - m_next - 1, base + m_next};
      long long guard = 4 * (m_next - m) + 8;
      while (!(it.tag == 1 && it.h_pred == want) && guard-- > 0) {
        it = nprime_step(it);
      }
      run.check(guard > 0 && it.state == jumped.state &&
                    it.kappa == jumped.kappa &&
                    it.nprime_count == jumped.nprime_count,
                "k=" + std::to_string(k) + " segment m=" + std::to_string(m),
                "segment jump equals iterated cascades",
                guard > 0 ? it.state.to_string() + " vs " +
                                jumped.state.to_string()
                          : "cascades never reached the segment endpoint");

      bool deltas_ok = true;
      for (int j = 0; j <= 2 * k + 1 && deltas_ok; ++j) {
        deltas_ok = jumped.state.at(j) - c.state.at(j) ==
                    2 * kappa_segment(m, m_next, j);
      }
      run.check(deltas_ok,
                "k=" + std::to_string(k) + " segment m=" + std::to_string(m),
                "entry deltas equal twice the counted bumps", "mismatch");

      c = jumped;
      m = m_next;
    }
  }

  if (k_max >= 4) {
    const EpochReport t2 = run_epoch(4, Tier::kT2);
    const EpochReport t3 = run_epoch(4, Tier::kT3);
    run.check(reports_equal(t2, t3), "k=4 t2 vs t3", report_digest(t2),
              report_digest(t3));
  }
  return run.finish();
}

SuiteResult suite_mutation() {
  SuiteRun run("mutation");
  for (Mutation m :
       {Mutation::kIncrementBumpAtI, Mutation::kIncrementKeepEntry0,
        Mutation::kZeroKeepEntry0, Mutation::kZeroSinglePad,
        Mutation::kHalveDropLeading, Mutation::kOverflowNoCarry}) {
    SuiteRun probe("table");
    run_table_conformance(probe, 1, [m](const State& s) {
      return mutated_step(s, m);
    });
    const SuiteResult probed = probe.finish();
    run.check(!probed.passed(), mutation_name(m),
              "table conformance detects the perturbed rule",
              "mutant passed " + std::to_string(probed.cases) + " cases");
  }
  return run.finish();
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> kNames{
      "gray", "table", "incr", "embanked", "epoch", "mutation"};
  return kNames;
}

SuiteResult run_suite(std::string_view name, int k_max) {
  if (k_max < 1) throw std::domain_error("k_max must be >= 1");
  if (name == "gray") return suite_gray();
  if (name == "table") return suite_table(std::min(k_max, 2));
  if (name == "incr") return suite_incr(std::min(k_max, 3));
  if (name == "embanked") return suite_embanked(std::min(k_max, 3));
  if (name == "epoch") return suite_epoch(k_max);
  if (name == "mutation") return suite_mutation();
  throw std::domain_error("unknown suite '" + std::string(name) + "'");
}

std::vector<SuiteResult> suite_all(int k_max) {
  if (k_max < 1) throw std::domain_error("k_max must be >= 1");
  std::vector<SuiteResult> out;
  out.reserve(suite_names().size());
  for (const std::string& name : suite_names()) {
    out.push_back(run_suite(name, k_max));
  }
  return out;
}

}  // namespace skelet17
