#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "skelet17/epoch.hpp"

namespace skelet17 {

struct FailureRecord {
  std::string input;
  std::string expected;
  std::string actual;
};

// Failures carry full states, not hashes; these are proof artifacts.
struct SuiteResult {
  std::string name;
  long long cases = 0;
  std::vector<FailureRecord> failures;
  double elapsed_sec = 0.0;

  bool passed() const { return failures.empty(); }
};

// Every (n, ell, sigma) delta of every single step across the full epochs
// k = 1..k_max matches its rule's table row, including the row's entry
// precondition. The variables are recomputed from scratch around each step.
SuiteResult suite_table(int k_max = 2);

// Gray-code properties over n < 2^16: decode round-trip, single-flip
// adjacency, the shift law against floor(n/2), plus the distance identity
// d_{j+1}(n+2, n) = d_j(floor(n/2)+1, floor(n/2)) over n < 2^12, j <= 14.
SuiteResult suite_gray();

// Every increment run arising in epochs k = 1..k_max: the batched jump
// equals the single-step replay, state for state.
SuiteResult suite_incr(int k_max = 3);

// Over every empty state of epochs k = 1..k_max: the weak-embankment bounds
// agree with the observed transit shape in both directions, and the bump/h
// predictions of the cursor algebra match the observed transits.
SuiteResult suite_embanked(int k_max = 3);

// Epoch-level agreement: all four tiers produce identical reports for
// k <= min(3, k_max); segment jumps equal iterated cascades with the kappa
// and entry-delta laws per segment; a T2-vs-T3 spot check at k = 4 when
// k_max >= 4.
SuiteResult suite_epoch(int k_max = 4);

// Self-test of the harness: each single-rule perturbation of the stepper
// must fail table conformance. A mutant that slips through is a failure.
SuiteResult suite_mutation();

const std::vector<std::string>& suite_names();
SuiteResult run_suite(std::string_view name, int k_max);

// Runs every suite with its bound capped at k_max. Requires k_max >= 1.
std::vector<SuiteResult> suite_all(int k_max);

}  // namespace skelet17
