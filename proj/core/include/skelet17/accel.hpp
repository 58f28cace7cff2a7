#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "skelet17/machine.hpp"

namespace skelet17 {

// A Halt would falsify nonhalting; it surfaces as a typed error rather than
// a silent outcome wherever the caller expects the process to continue.
class HaltEncountered : public std::runtime_error {
 public:
  HaltEncountered(State state, long long at_step);
  const State& state() const { return state_; }
  long long at_step() const { return at_step_; }

 private:
  State state_;
  long long at_step_;
};

// Invariant breakage: a formula the process is proven to satisfy failed to
// hold on an executed trajectory.
class VerificationError : public std::logic_error {
 public:
  explicit VerificationError(const std::string& what)
      : std::logic_error(what) {}
};

struct BatchResult {
  State state;
  Int count = 0;
};

// Applies a maximal run of Increment rules in one jump. The run length is
// min(a_0 + 1, distance of n to its boundary: 0 for sigma = -1, 2^ell - 1
// for sigma = +1); a tie between the two stop reasons is impossible by the
// parity of the entry sum. Entry i gains d_i(n, n') for i >= 1 and entry 0
// loses the run length; the result never classifies as Increment again.
BatchResult batch_increments(const State& s);

using HPair = std::pair<Int, Int>;

// Outcome of one empty-to-empty transit T_E.
struct TransitSummary {
  explicit TransitSummary(State start) : successor(std::move(start)) {}

  State successor;  // N(E), the next empty state
  std::optional<Int> s1, h1, s2, h2;  // n around the first two Halve rules
  int halve_count = 0;
  bool saw_overflow = false;
  bool weakly_embanked = false;
  bool embanked = false;
  std::optional<int> bump_index;  // set when successor == E[i] for exactly one i
  long long step_count = 0;

  HPair h() const;  // requires two Halve rules seen
  HPair s() const;
};

struct TransitOptions {
  bool batched = true;          // false: pure single-step ground truth
  bool verify_batches = false;  // replay each batch by single steps and compare
  long long max_steps = 1'000'000'000;
  TraceSink* sink = nullptr;    // per-step events; requires batched = false
};

// Runs T_E from an empty state until the next empty state. Records the h/s
// tuples at the first two Halve rules and classifies the embankment of the
// transit. Halt inside the transit throws HaltEncountered.
TransitSummary next_empty(const State& empty_state,
                          const TransitOptions& opts = {});

// Advances by one rule event: a single Overflow/Zero/Halve step, or a
// maximal Increment run. Returns nullopt at Halt, leaving the state as is.
struct RuleEvent {
  Rule rule;
  Int count = 1;  // micro-steps consumed (run length for Increment)
};
std::optional<RuleEvent> advance_event(State& s, const TransitOptions& opts);

// The weak-embankment bounds: a_0(E) < 2^(2k+1) - 1 and
// a_1(E) < 3 * 2^(2k) - 1 with the epoch index k read off ell(E) = 2k + 1.
// An empty state is weakly embanked exactly when both hold.
bool weak_bounds(const State& empty_state);

// E[i]: entry i increased by 2. Never changes (n, ell, sigma).
State bump(const State& s, int i);

// How the h and s tuples of a transit move when the source state is bumped:
// i = 0 pulls h_1 down by one, i = 1 pushes h_2 up by one, i >= 2 leaves
// both untouched (only entries 0 and 1 feed the first two Halve rules).
std::pair<HPair, HPair> h_after_bump(const HPair& h, const HPair& s, int i);

// Predicted index of the next bump: nu2(h_1) for a 0-rooted state,
// nu2(h_2 + 1) + 1 for a 1-rooted one, with (h_1, h_2) the h tuple of the
// transit that produced the state.
int next_bump_index(int tag, const HPair& h_pred);

// Per-index bump counts across a span of transits.
struct KappaVector {
  explicit KappaVector(int size) : counts(static_cast<std::size_t>(size), 0) {}
  void add(int j);
  std::vector<long long> counts;
  bool operator==(const KappaVector&) const = default;
};

// The fast-iteration state: an empty rooted state plus everything the bump
// algebra needs to predict its successor without executing a single rule.
struct RootedCursor {
  State state;
  int tag = 1;        // index parity of the bump that produced `state`
  HPair h_pred;       // h of the transit that produced `state`
  int k = 1;          // epoch index, ell(state) = 2k + 1
  KappaVector kappa;  // accumulated bump counts since the epoch seed
  long long nprime_count = 0;
};

// Builds S_k, observes its first transit (which must report
// h = (2^(2k) - 1, 2^(2k)) and a bump at 2k + 1), and performs the first
// cascade down to index 1. A formula mismatch is a hard failure.
RootedCursor seed_cursor(int k);

// One cascade: bumps at j, j-2, ..., down to 1 or 0, where j is the
// predicted next bump index. With check on, every state that receives a
// further bump must pass weak_bounds. The final state is produced
// unconditionally; deciding whether to keep iterating is the caller's call.
RootedCursor nprime_step(const RootedCursor& c, bool check = true);

}  // namespace skelet17
