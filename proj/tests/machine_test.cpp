#include "skelet17/machine.hpp"

#include <gtest/gtest.h>

#include <vector>

namespace skelet17 {
namespace {

State st(const char* text) { return State::parse(text); }

TEST(StateBasics, ParseAndPrintRoundTrip) {
  for (const char* text : {"0,2,4,0", "2,2,6,8,18,0", "0,0,3,2,6,8,18,-1"}) {
    EXPECT_EQ(st(text).to_string(), text);
  }
}

TEST(StateBasics, DisplayOrderIndexing) {
  const State s = st("0,2,4,0");  // (a_3, a_2, a_1, a_0)
  EXPECT_EQ(s.ell(), 3);
  EXPECT_EQ(s.at(0), 0);
  EXPECT_EQ(s.at(1), 4);
  EXPECT_EQ(s.at(2), 2);
  EXPECT_EQ(s.at(3), 0);
  EXPECT_EQ(s.leading(), 0);
}

TEST(StateBasics, RejectsDegenerateShapes) {
  EXPECT_THROW(st("5"), std::invalid_argument);          // too short
  EXPECT_THROW(st("1,-1,0"), std::invalid_argument);     // negative inner
  EXPECT_THROW(st("1,2,-2"), std::invalid_argument);     // entry 0 below -1
  EXPECT_THROW(st("1,2,x"), std::invalid_argument);
  EXPECT_THROW(st(""), std::invalid_argument);
  EXPECT_THROW(st("1,,2"), std::invalid_argument);
  EXPECT_NO_THROW(st("1,2,-1"));  // -1 at entry 0 is the halve marker
}

TEST(StateVarsOp, PinnedValues) {
  EXPECT_EQ(state_vars(st("0,2,4,0")), (StateVars{0, 3, -1}));
  EXPECT_EQ(state_vars(st("0,0,3,2,6,8,18,-1")), (StateVars{31, 7, -1}));
  EXPECT_EQ(state_vars(st("1,1,4,4,11,17,-1")), (StateVars{34, 6, +1}));
}

TEST(Classify, PinnedPatterns) {
  EXPECT_EQ(classify(st("2,2,6,8,18,0")), Rule::kZero);
  EXPECT_EQ(classify(st("0,0,3,2,6,8,18,-1")), Rule::kHalve);
  EXPECT_EQ(classify(st("0,0,2,4")), Rule::kHalt);
  EXPECT_EQ(classify(st("1,2,4,0")), Rule::kOverflow);
  EXPECT_EQ(classify(st("0,0,3,2,6,8,18")), Rule::kIncrement);
}

// The four rule patterns written out directly, with the same precedence, as
// an independent check that exactly one applies to every well-formed state.
Rule classify_oracle(const State& s) {
  bool all_even = true, rest_even = true;
  for (int i = 0; i <= s.ell(); ++i) {
    const bool odd = (s.at(i) & 1) != 0;
    if (odd) {
      all_even = false;
      if (i != s.ell()) rest_even = false;
    }
  }
  if (!((s.at(s.ell()) & 1) == 0) && rest_even) return Rule::kOverflow;
  if (all_even && s.at(s.ell()) == 0 && s.at(s.ell() - 1) == 0) {
    return Rule::kHalt;
  }
  if (all_even) return Rule::kZero;
  if (s.at(0) == -1) return Rule::kHalve;
  return Rule::kIncrement;
}

TEST(Classify, TotalOnSmallStates) {
  // Every state with entries in {-1..3} and 2..4 entries that passes
  // construction classifies, and agrees with the pattern oracle.
  for (int len = 2; len <= 4; ++len) {
    std::vector<Int> entries(static_cast<std::size_t>(len), -1);
    const auto advance = [&]() {
      for (int i = 0; i < len; ++i) {
        if (entries[static_cast<std::size_t>(i)] < 3) {
          ++entries[static_cast<std::size_t>(i)];
          return true;
        }
        entries[static_cast<std::size_t>(i)] = -1;
      }
      return false;
    };
    do {
      bool valid = true;
      for (int i = 1; i < len; ++i) {
        valid = valid && entries[static_cast<std::size_t>(len - 1 - i)] >= 0;
      }
      valid = valid && entries[static_cast<std::size_t>(len - 1)] >= -1;
      if (!valid) continue;
      const State s(entries);
      ASSERT_EQ(classify(s), classify_oracle(s)) << s.to_string();
    } while (advance());
  }
}

TEST(Step, ExampleTransitStates) {
  EXPECT_EQ(*step(st("2,2,6,8,18,0")), st("0,0,3,2,6,8,18,-1"));
  EXPECT_EQ(*step(st("0,0,3,2,6,8,18,-1")), st("0,0,3,2,6,8,18"));
  // Single increment: rightmost odd index 4, bump 5, decrement 0.
  EXPECT_EQ(*step(st("0,0,3,2,6,8,18")), st("0,1,3,2,6,8,17"));
  EXPECT_EQ(state_vars(st("0,0,3,2,6,8,18")).n, 15);
  EXPECT_EQ(state_vars(st("0,1,3,2,6,8,17")).n, 16);
}

TEST(Step, HaltReturnsNothing) {
  EXPECT_FALSE(step(st("0,0,2,4")).has_value());
}

TEST(Step, OverflowShape) {
  // Prepend a zero and carry one into the old leading entry.
  EXPECT_EQ(*step(st("1,2,4,0")), st("0,2,2,4,0"));
}

struct TableRowCheck : TraceSink {
  void on_step(const StepEvent& ev) override {
    ++steps;
    switch (ev.rule) {
      case Rule::kZero:
        ok = ok && ev.before.n == 0 && ev.before.sigma == -1 &&
             ev.after.n == pow2(ev.before.ell) - 1 &&
             ev.after.ell == ev.before.ell + 2 && ev.after.sigma == -1;
        break;
      case Rule::kOverflow:
        ok = ok && ev.before.n == pow2(ev.before.ell) - 1 &&
             ev.before.sigma == +1 && ev.after.n == 0 &&
             ev.after.ell == ev.before.ell + 1 && ev.after.sigma == -1;
        break;
      case Rule::kHalve:
        ok = ok && ev.after.n == ev.before.n / 2 &&
             ev.after.ell == ev.before.ell - 1 &&
             ev.after.sigma == -ev.before.sigma;
        break;
      case Rule::kIncrement:
        ok = ok && ev.after.n == ev.before.n + ev.before.sigma &&
             ev.after.ell == ev.before.ell &&
             ev.after.sigma == ev.before.sigma;
        break;
      case Rule::kHalt:
        ok = false;
        break;
    }
    if (ev.state_after) {
      for (int i = 1; i <= ev.state_after->ell(); ++i) {
        ok = ok && ev.state_after->at(i) >= 0;
      }
      ok = ok && ev.state_after->at(0) >= -1;
    }
  }
  bool ok = true;
  long long steps = 0;
};

TEST(RunNaive, FirstStepFromTheStartState) {
  // The zero rule: prepend two zeros, carry into the old leading entry,
  // decrement entry 0.
  const RunOutcome out = run_naive(st("0,2,4,0"), 1);
  EXPECT_FALSE(out.halted);
  EXPECT_EQ(out.state, *step(st("0,2,4,0")));
  EXPECT_EQ(out.state, st("0,0,1,2,4,-1"));
  EXPECT_EQ(out.counts.zero, 1);
}

TEST(RunNaive, HaltsImmediatelyOnAHaltState) {
  const RunOutcome out = run_naive(st("0,0,2,4"), 1);
  EXPECT_TRUE(out.halted);
  EXPECT_EQ(out.steps_done, 0);
}

TEST(RunNaive, LongRunNeverHaltsAndConformsToTheTable) {
  TableRowCheck sink;
  const RunOutcome out = run_naive(st("0,2,4,0"), 20000, &sink);
  EXPECT_FALSE(out.halted);
  EXPECT_EQ(out.steps_done, 20000);
  EXPECT_EQ(sink.steps, 20000);
  EXPECT_TRUE(sink.ok);
}

TEST(RunNaive, ZeroBudgetIsIdentity) {
  const RunOutcome out = run_naive(st("0,2,4,0"), 0);
  EXPECT_EQ(out.state, st("0,2,4,0"));
  EXPECT_EQ(out.steps_done, 0);
}

TEST(IsEmpty, Definition) {
  EXPECT_TRUE(is_empty(st("0,2,4,0")));
  EXPECT_FALSE(is_empty(st("0,0,2,4")));       // halt pattern
  EXPECT_FALSE(is_empty(st("0,0,3,2,6,8,18")));  // odd entry, n != 0
}

TEST(StartState, ClosedForm) {
  EXPECT_EQ(start_state(1), st("0,2,4,0"));
  EXPECT_EQ(start_state(2), st("0,2,4,8,16,0"));
  EXPECT_EQ(start_state(3), st("0,2,4,8,16,32,64,0"));
  EXPECT_THROW(start_state(0), std::domain_error);
}

TEST(Bump, PreservesStateVars) {
  const State e = st("2,2,6,8,18,0");
  for (int i = 0; i <= e.ell(); ++i) {
    EXPECT_EQ(state_vars(e.with_bump(i)), state_vars(e)) << i;
  }
  EXPECT_THROW(e.with_bump(6), std::domain_error);
  EXPECT_THROW(e.with_bump(-1), std::domain_error);
}

}  // namespace
}  // namespace skelet17
