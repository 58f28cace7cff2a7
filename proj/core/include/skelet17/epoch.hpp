#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "skelet17/accel.hpp"

namespace skelet17 {

enum class Tier { kT0, kT1, kT2, kT3 };

const char* tier_name(Tier t);
std::optional<Tier> tier_from_name(std::string_view name);

// Smallest m' > m with odd 2-adic valuation. Requires m >= 2 with nu2(m) odd.
Int next_odd_val(Int m);

// A maximal stretch [m, m_next] whose endpoints have odd 2-adic valuation
// and whose interior has even valuation throughout.
struct Segment {
  Segment(Int m, Int m_next);  // validates the shape above
  Int m;
  Int m_next;
  Int d() const { return m_next - m; }
};

// #{e in [m+1, m_next] : max(1, 2^(j-1)) | e}. For j in {0, 1} this is the
// segment width d.
long long kappa_segment(Int m, Int m_next, int j);

// Jumps a 1-rooted cursor with h_pred = (2^(2k)-m-1, 2^(2k)+m) across one
// segment in closed form: entry j gains 2 * kappa_segment(m, m_next, j),
// h_pred moves to (2^(2k)-m_next-1, 2^(2k)+m_next), and 2 * d cascades are
// accounted. A precondition-shape mismatch is a hard failure.
RootedCursor segment_jump(const RootedCursor& c, const Segment& seg);

// E'', the first empty state of the epoch that fails the weak-embankment
// bounds, built directly from the kappa totals.
State construct_E2(int k);

// The empty state right after the epoch's single Overflow, and its cascade
// successor. Closed forms, cross-checked against execution by the tests.
State e_final(int k);
State e_prime_final(int k);

// kappa totals over S_k -> E'', indexed j in [0, 2k+1].
std::vector<long long> kappa_closed_form(int k);

struct EndgameResult {
  State s_next;
  bool overflow_seen = false;
  std::vector<std::pair<std::string, State>> landmarks;
  long long step_count = 0;
  long long overflow_count = 0;
};

// The explicit path from E'' to S_{k+1}: Zero, 2^(2k+1)-4 Increments, Halve,
// 2^(2k+2)-2 Increments, the epoch's one Overflow, then the cascade through
// E_k_final and E_prime_k_final. Every checkpoint is asserted against its
// expected (n, sigma) pair and closed form; a mismatch is a hard failure.
EndgameResult endgame(const State& e2, bool batched = true);

// Per-epoch certificate.
struct EpochReport {
  int k = 0;
  State s_next;
  std::vector<long long> kappa_total;
  long long overflow_count = 0;
  std::vector<std::pair<std::string, State>> landmarks;
  std::vector<std::pair<std::string, bool>> tiers_agree;
  long long nprime_total = 0;
  std::optional<long long> naive_step_total;
};

// S_k |-> S_{k+1} at the requested tier, with every in-tier cross-check
// asserted along the way. `check` gates the weak-bounds checks of the T2/T3
// fast paths; leave it on unless the property suites have already validated
// the same k range.
EpochReport run_epoch(int k, Tier tier, bool check = true);

struct NonhaltSummary {
  int k_max = 0;
  long long total_overflows = 0;
  std::vector<EpochReport> reports;
};

// Chains run_epoch for k = 1..k_max and verifies that each epoch's output
// literally seeds the next.
NonhaltSummary prove_nonhalt(int k_max, Tier tier, bool check = true);
NonhaltSummary prove_nonhalt(std::span<const Tier> tier_per_k,
                             bool check = true);

}  // namespace skelet17
