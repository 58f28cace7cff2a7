#include "skelet17/epoch.hpp"

#include <gtest/gtest.h>

namespace skelet17 {
namespace {

State st(const char* text) { return State::parse(text); }

TEST(NextOddVal, SmallValues) {
  EXPECT_EQ(next_odd_val(2), 6);
  EXPECT_EQ(next_odd_val(6), 8);
  EXPECT_EQ(next_odd_val(8), 10);
  EXPECT_THROW(next_odd_val(4), std::domain_error);  // nu2(4) is even
  EXPECT_THROW(next_odd_val(1), std::domain_error);
}

TEST(NextOddVal, MatchesLinearScan) {
  Int m = 2;
  while (m < 1024) {
    const Int next = next_odd_val(m);
    for (Int e = m + 1; e < next; ++e) EXPECT_EQ(nu2(e) % 2, 0) << e;
    EXPECT_EQ(nu2(next) % 2, 1);
    m = next;
  }
}

TEST(KappaSegment, PinnedValues) {
  EXPECT_EQ(kappa_segment(2, 6, 0), 4);  // all of 3..6
  EXPECT_EQ(kappa_segment(2, 6, 1), 4);
  EXPECT_EQ(kappa_segment(2, 6, 2), 2);  // 4 and 6
  EXPECT_EQ(kappa_segment(2, 6, 3), 1);  // only 4
  EXPECT_EQ(kappa_segment(2, 6, 4), 0);
}

TEST(KappaSegment, MatchesDirectCount) {
  Int m = 2;
  while (m < 254) {
    const Int next = next_odd_val(m);
    for (int j = 0; j <= 9; ++j) {
      long long count = 0;
      const Int q = j <= 1 ? 1 : pow2(j - 1);
      for (Int e = m + 1; e <= next; ++e) count += e % q == 0;
      ASSERT_EQ(kappa_segment(m, next, j), count) << m << " " << j;
    }
    m = next;
  }
}

TEST(KappaSegment, SummedOverSegmentsMatchesTheSpanCount) {
  // Segments telescope: the sum over [2, 2^2k - 2] counts the whole span.
  for (int k : {2, 3}) {
    const Int top = pow2(2 * k) - 2;
    for (int j = 0; j <= 2 * k + 1; ++j) {
      long long total = 0;
      Int m = 2;
      while (m < top) {
        const Int next = next_odd_val(m);
        total += kappa_segment(m, next, j);
        m = next;
      }
      long long expected = 0;
      const Int q = j <= 1 ? 1 : pow2(j - 1);
      for (Int e = 3; e <= top; ++e) expected += e % q == 0;
      EXPECT_EQ(total, expected) << "k=" << k << " j=" << j;
    }
  }
}

TEST(Segment, ValidatesShape) {
  EXPECT_NO_THROW(Segment(2, 6));
  EXPECT_THROW(Segment(2, 8), std::domain_error);   // skips 6
  EXPECT_THROW(Segment(2, 4), std::domain_error);   // even valuation end
  EXPECT_THROW(Segment(6, 2), std::domain_error);
}

RootedCursor cursor_after(int k, int cascades) {
  RootedCursor c = seed_cursor(k);
  for (int i = 1; i < cascades; ++i) c = nprime_step(c);
  return c;
}

TEST(SegmentJump, MatchesIteratedCascadesOnTheFirstSegment) {
  const RootedCursor c = cursor_after(2, 5);
  ASSERT_EQ(c.h_pred, HPair(13, 18));
  const RootedCursor jumped = segment_jump(c, Segment(2, 6));
  EXPECT_EQ(jumped.h_pred, HPair(9, 22));
  EXPECT_EQ(jumped.tag, 1);
  EXPECT_EQ(jumped.nprime_count, c.nprime_count + 8);  // 2d cascades
  EXPECT_EQ(jumped.state.at(0), c.state.at(0) + 8);    // +2d
  EXPECT_EQ(jumped.state.at(1), c.state.at(1) + 8);
  EXPECT_EQ(jumped.state.at(2), c.state.at(2) + 4);
  EXPECT_EQ(jumped.state.at(3), c.state.at(3) + 2);
  EXPECT_EQ(jumped.state.at(4), c.state.at(4));
  EXPECT_EQ(jumped.state.at(5), c.state.at(5));

  RootedCursor it = c;
  for (int i = 0; i < 8; ++i) it = nprime_step(it);
  EXPECT_EQ(it.state, jumped.state);
  EXPECT_EQ(it.h_pred, jumped.h_pred);
  EXPECT_EQ(it.kappa, jumped.kappa);
}

TEST(SegmentJump, RejectsShapeMismatches) {
  const RootedCursor c = cursor_after(2, 5);
  EXPECT_THROW(segment_jump(c, Segment(6, 8)), VerificationError);
}

TEST(ConstructE2, ClosedFormAgainstTheNaiveOracle) {
  // Oracle: chain transits from S_k and take the first empty state that
  // fails the weak-embankment bounds.
  for (int k : {1, 2}) {
    State cur = start_state(k);
    std::optional<State> boundary;
    for (int hops = 0; hops < 4000 && !boundary; ++hops) {
      cur = next_empty(cur, {.batched = false}).successor;
      if (!weak_bounds(cur)) boundary = cur;
    }
    ASSERT_TRUE(boundary.has_value()) << k;
    EXPECT_EQ(*boundary, construct_E2(k)) << k;
  }
}

TEST(ConstructE2, PinnedValues) {
  EXPECT_EQ(construct_E2(1), st("2,4,12,4"));
  EXPECT_EQ(construct_E2(2), st("2,4,12,22,48,28"));
  EXPECT_FALSE(weak_bounds(construct_E2(3)));
  // The bound failure is always through the a_1 clause alone.
  for (int k : {1, 2, 3, 4}) {
    const State e2 = construct_E2(k);
    EXPECT_TRUE(is_empty(e2));
    EXPECT_LT(e2.at(0), pow2(2 * k + 1) - 1) << k;
    EXPECT_GE(e2.at(1), 3 * pow2(2 * k) - 1) << k;
  }
}

TEST(ClosedForms, FinalStatesMatchExecution) {
  // e_final / e_prime_final against the literal transit chain of epoch 1.
  const EndgameResult end = endgame(construct_E2(1));
  EXPECT_EQ(end.landmarks[0].first, "E_k_final");
  EXPECT_EQ(end.landmarks[0].second, st("0,2,2,8,12,0"));
  EXPECT_EQ(e_final(1), st("0,2,2,8,12,0"));
  EXPECT_EQ(end.landmarks[1].first, "E_prime_k_final");
  EXPECT_EQ(end.landmarks[1].second, st("0,2,4,8,14,0"));
  EXPECT_EQ(e_prime_final(1), st("0,2,4,8,14,0"));
  EXPECT_EQ(e_final(2), st("0,2,2,8,14,32,60,0"));
  EXPECT_EQ(e_prime_final(2), st("0,2,4,8,16,32,62,0"));
  // The state after the Overflow is always weakly embanked.
  for (int k : {1, 2, 3}) EXPECT_TRUE(weak_bounds(e_final(k))) << k;
}

TEST(KappaDecomposition, ThreePhasesMatchTheirDisplays) {
  // kappa(S_k -> E'') splits into the five seeding cascades, the segment
  // sweep, and the final single bump, each with its own closed form.
  for (int k : {1, 2, 3}) {
    RootedCursor c = seed_cursor(k);
    for (int i = 0; i < 4; ++i) c = nprime_step(c);
    const std::vector<long long> to_e = c.kappa.counts;
    for (int j = 0; j <= 2 * k + 1; ++j) {
      long long want = 0;
      if (j == 0) want = 2;
      else if (j == 1) want = 3;
      else if (j == 2) want = 1;
      else want = j % 2;
      ASSERT_EQ(to_e[static_cast<std::size_t>(j)], want)
          << "k=" << k << " j=" << j;
    }

    while (weak_bounds(c.state)) c = nprime_step(c);
    const std::vector<long long>& total = c.kappa.counts;
    for (int j = 0; j <= 2 * k + 1; ++j) {
      // Middle phase: multiples of max(1, 2^(j-1)) in [3, 2^(2k) - 2].
      long long middle = 0;
      const Int q = j <= 1 ? 1 : pow2(j - 1);
      for (Int e = 3; e <= pow2(2 * k) - 2; ++e) middle += e % q == 0;
      const long long last = j == 1 ? 1 : 0;
      ASSERT_EQ(total[static_cast<std::size_t>(j)],
                to_e[static_cast<std::size_t>(j)] + middle + last)
          << "k=" << k << " j=" << j;
    }
    ASSERT_EQ(total, kappa_closed_form(k)) << k;
  }
}

TEST(Endgame, EpochOne) {
  const EndgameResult end = endgame(st("2,4,12,4"));
  EXPECT_EQ(end.s_next, st("0,2,4,8,16,0"));
  EXPECT_TRUE(end.overflow_seen);
  EXPECT_EQ(end.overflow_count, 1);
}

TEST(Endgame, BatchedAndSteppedAgree) {
  for (int k : {1, 2}) {
    const EndgameResult a = endgame(construct_E2(k), /*batched=*/true);
    const EndgameResult b = endgame(construct_E2(k), /*batched=*/false);
    EXPECT_EQ(a.s_next, b.s_next);
    EXPECT_EQ(a.step_count, b.step_count);
    EXPECT_EQ(a.landmarks, b.landmarks);
  }
}

TEST(Endgame, RejectsOtherStates) {
  EXPECT_THROW(endgame(st("0,2,4,0")), VerificationError);
  EXPECT_THROW(endgame(st("0,0,3,2,6,8,18")), std::domain_error);
}

TEST(KappaClosedForm, EpochOne) {
  EXPECT_EQ(kappa_closed_form(1), (std::vector<long long>{2, 4, 1, 1}));
}

TEST(KappaClosedForm, ReproducesTheBoundaryState) {
  // a_j(E'') = a_j(S_k) + 2 kappa_j, index for index.
  for (int k : {1, 2, 3, 4}) {
    const State sk = start_state(k);
    const State e2 = construct_E2(k);
    const std::vector<long long> kappa = kappa_closed_form(k);
    for (int j = 0; j <= 2 * k + 1; ++j) {
      EXPECT_EQ(e2.at(j),
                sk.at(j) + 2 * kappa[static_cast<std::size_t>(j)])
          << "k=" << k << " j=" << j;
    }
  }
}

TEST(RunEpoch, EpochOneAtEveryTier) {
  for (Tier tier : {Tier::kT0, Tier::kT1, Tier::kT2, Tier::kT3}) {
    const EpochReport r = run_epoch(1, tier);
    EXPECT_EQ(r.s_next, st("0,2,4,8,16,0")) << tier_name(tier);
    EXPECT_EQ(r.overflow_count, 1);
    EXPECT_EQ(r.kappa_total, (std::vector<long long>{2, 4, 1, 1}));
    EXPECT_EQ(r.nprime_total, 6);
    ASSERT_EQ(r.landmarks.size(), 5u);
    EXPECT_EQ(r.landmarks[0].second, st("2,4,10,4"));   // after five cascades
    EXPECT_EQ(r.landmarks[1].second, st("2,4,10,4"));   // E' coincides at k=1
    EXPECT_EQ(r.landmarks[2].second, st("2,4,12,4"));   // E''
    EXPECT_EQ(r.landmarks[3].second, st("0,2,2,8,12,0"));
    EXPECT_EQ(r.landmarks[4].second, st("0,2,4,8,14,0"));
  }
}

TEST(RunEpoch, TiersAgreeAtKTwoAndThree) {
  for (int k : {2, 3}) {
    const EpochReport t0 = run_epoch(k, Tier::kT0);
    for (Tier tier : {Tier::kT1, Tier::kT2, Tier::kT3}) {
      const EpochReport r = run_epoch(k, tier);
      EXPECT_EQ(r.s_next, t0.s_next) << k << " " << tier_name(tier);
      EXPECT_EQ(r.kappa_total, t0.kappa_total) << k << " " << tier_name(tier);
      EXPECT_EQ(r.landmarks, t0.landmarks) << k << " " << tier_name(tier);
      EXPECT_EQ(r.nprime_total, t0.nprime_total);
      EXPECT_EQ(r.overflow_count, 1);
    }
  }
}

TEST(RunEpoch, CursorAndSegmentTiersAgreeDeeper) {
  // The fast tiers stay in lockstep well past the fully replayed range.
  for (int k : {5, 6}) {
    const EpochReport t2 = run_epoch(k, Tier::kT2);
    const EpochReport t3 = run_epoch(k, Tier::kT3);
    EXPECT_EQ(t2.s_next, t3.s_next) << k;
    EXPECT_EQ(t2.kappa_total, t3.kappa_total) << k;
    EXPECT_EQ(t2.landmarks, t3.landmarks) << k;
    EXPECT_EQ(t2.nprime_total, t3.nprime_total) << k;
  }
}

TEST(RunEpoch, StepTotalsAreTierIndependent) {
  const EpochReport t0 = run_epoch(2, Tier::kT0);
  const EpochReport t1 = run_epoch(2, Tier::kT1);
  ASSERT_TRUE(t0.naive_step_total && t1.naive_step_total);
  EXPECT_EQ(*t0.naive_step_total, *t1.naive_step_total);
  EXPECT_FALSE(run_epoch(2, Tier::kT3).naive_step_total.has_value());
}

TEST(RunEpoch, RejectsBadK) {
  EXPECT_THROW(run_epoch(0, Tier::kT0), std::domain_error);
}

TEST(ProveNonhalt, ChainsThreeEpochs) {
  const NonhaltSummary sum = prove_nonhalt(3, Tier::kT0);
  EXPECT_EQ(sum.k_max, 3);
  EXPECT_EQ(sum.total_overflows, 3);
  ASSERT_EQ(sum.reports.size(), 3u);
  EXPECT_EQ(sum.reports[0].s_next, st("0,2,4,8,16,0"));
  EXPECT_EQ(sum.reports[1].s_next, start_state(3));
  EXPECT_EQ(sum.reports[2].s_next, start_state(4));
}

TEST(ProveNonhalt, MixedTiersAndBadInput) {
  const std::vector<Tier> tiers{Tier::kT1, Tier::kT2, Tier::kT3};
  const NonhaltSummary sum = prove_nonhalt(tiers);
  EXPECT_EQ(sum.total_overflows, 3);
  EXPECT_THROW(prove_nonhalt(0, Tier::kT0), std::domain_error);
}

TEST(TierNames, RoundTrip) {
  for (Tier t : {Tier::kT0, Tier::kT1, Tier::kT2, Tier::kT3}) {
    EXPECT_EQ(tier_from_name(tier_name(t)), t);
  }
  EXPECT_FALSE(tier_from_name("t9").has_value());
}

}  // namespace
}  // namespace skelet17
