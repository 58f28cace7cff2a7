#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "skelet17/epoch.hpp"
#include "skelet17/verify.hpp"

namespace skelet17 {

// Streams one JSON object per step: {"step":..,"rule":..,"n":..,"ell":..,
// "sigma":..,"state":".."}. The state text is elided once the state grows
// beyond `state_limit` entries.
class JsonlTraceWriter : public TraceSink {
 public:
  explicit JsonlTraceWriter(std::ostream& os, std::size_t state_limit = 32);
  void on_step(const StepEvent& ev) override;

 private:
  std::ostream& os_;
  std::size_t state_limit_;
};

// Writes the header "step,n,sigma,rule" and one row per step across the
// transit T_E, single-stepped so the n curve is complete. Returns the
// transit summary for the caller's bookkeeping.
TransitSummary write_ncurve_csv(std::ostream& os, const State& empty_state);

// All JSON output is key-ordered and carries no timing, so identical inputs
// serialize to identical bytes.
std::string epoch_report_json(const EpochReport& report);
std::string suite_result_json(const SuiteResult& result);
std::string suite_results_json(const std::vector<SuiteResult>& results);

// Human-readable one-block rendering; timing is the caller's concern.
void print_suite_result(std::ostream& os, const SuiteResult& result);

}  // namespace skelet17
