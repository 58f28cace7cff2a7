#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "skelet17/numerics.hpp"

namespace skelet17 {

// The five rewrite rules of the Skelet #17 counter process. "Zero" is also
// known as "Empty"; both names refer to the same rule and this codebase uses
// Zero throughout.
enum class Rule { kOverflow, kHalt, kZero, kHalve, kIncrement };

const char* rule_name(Rule r);

// The derived triple (n, ell, sigma): Gray-decoded parity word of entries
// 1..ell, size minus one, and entry-sum parity sign.
struct StateVars {
  Int n = 0;
  int ell = 0;
  int sigma = -1;  // +1 iff the entry sum is odd

  bool operator==(const StateVars&) const = default;
};

// A process state (a_ell, ..., a_0). Entries are stored low index first;
// construction, parsing and printing use the conventional display order with
// the leading entry a_ell first, e.g. "0,2,4,0".
//
// Construction rejects degenerate shapes: fewer than two entries, negative
// entries at indices >= 1, or entry 0 below -1. None of those are reachable
// and admitting them would make rule classification partial.
class State {
 public:
  // `display_order` lists a_ell first, a_0 last.
  explicit State(std::vector<Int> display_order);

  // Parses the comma-separated display order text form, e.g. "0,2,4,0".
  static State parse(std::string_view text);

  // Builds a state from entries indexed low first (low[i] = a_i).
  static State from_low_order(std::vector<Int> low);

  Int at(int i) const;          // a_i
  int ell() const { return static_cast<int>(low_.size()) - 1; }
  int size() const { return static_cast<int>(low_.size()); }
  Int leading() const { return low_.back(); }

  // Entry i increased by 2; everything else unchanged.
  State with_bump(int i) const;

  std::string to_string() const;  // display order, comma separated

  bool operator==(const State&) const = default;

  // Low-index-first entries, for algorithms that walk the state.
  const std::vector<Int>& low_order() const { return low_; }

 private:
  struct LowOrderTag {};
  State(LowOrderTag, std::vector<Int> low);
  void validate() const;

  std::vector<Int> low_;  // low_[i] = a_i
};

StateVars state_vars(const State& s);

// Exactly one rule applies to any well-formed state; the precedence
// Overflow, Halt, Zero, Halve, Increment makes the match total.
Rule classify(const State& s);

// Applies the rule selected by classify. Returns nullopt when the rule is
// Halt. The (n, ell, sigma) change always matches the rule's table row.
std::optional<State> step(const State& s);

// n(E) = 0, sigma(E) = -1 and the next rule is Zero (not Halt). Empty states
// are the anchor points between which all acceleration jumps.
bool is_empty(const State& s);

// S_k = (0, 2, 4, ..., 2^(2k), 0), the epoch seed. Requires k >= 1.
State start_state(int k);

struct StepEvent {
  long long index = 0;  // 1-based step number
  Rule rule = Rule::kIncrement;
  StateVars before;
  StateVars after;
  const State* state_after = nullptr;  // valid only during the callback
};

class TraceSink {
 public:
  virtual ~TraceSink() = default;
  virtual void on_step(const StepEvent& ev) = 0;
};

struct RuleCounts {
  long long overflow = 0;
  long long zero = 0;
  long long halve = 0;
  long long increment = 0;

  long long total() const { return overflow + zero + halve + increment; }
  bool operator==(const RuleCounts&) const = default;
};

struct RunOutcome {
  bool halted = false;
  State state;                 // final state (the halt state when halted)
  long long steps_done = 0;    // steps successfully applied
  RuleCounts counts;
};

// Applies step repeatedly, emitting one StepEvent per step to `sink` when it
// is non-null. Stops after max_steps steps or at a Halt, whichever is first.
// The runner never retains history; traces stream.
RunOutcome run_naive(const State& start, long long max_steps,
                     TraceSink* sink = nullptr);

}  // namespace skelet17
