#include "skelet17/io.hpp"

#include <ostream>

#include "json.hpp"

namespace skelet17 {

namespace {

using ordered_json = nlohmann::ordered_json;

}  // namespace

JsonlTraceWriter::JsonlTraceWriter(std::ostream& os, std::size_t state_limit)
    : os_(os), state_limit_(state_limit) {}

void JsonlTraceWriter::on_step(const StepEvent& ev) {
  ordered_json line;
  line["step"] = ev.index;
  line["rule"] = rule_name(ev.rule);
  line["n"] = ev.after.n;
  line["ell"] = ev.after.ell;
  line["sigma"] = ev.after.sigma;
  if (ev.state_after &&
      static_cast<std::size_t>(ev.state_after->size()) <= state_limit_) {
    line["state"] = ev.state_after->to_string();
  }
  os_ << line.dump() << '\n';
}

namespace {

class NCurveSink : public TraceSink {
 public:
  explicit NCurveSink(std::ostream& os) : os_(os) {}
  void on_step(const StepEvent& ev) override {
    os_ << ev.index << ',' << ev.after.n << ',' << ev.after.sigma << ','
        << rule_name(ev.rule) << '\n';
  }

 private:
  std::ostream& os_;
};

}  // namespace

TransitSummary write_ncurve_csv(std::ostream& os, const State& empty_state) {
  os << "step,n,sigma,rule\n";
  NCurveSink sink(os);
  return next_empty(empty_state,
                    TransitOptions{.batched = false, .sink = &sink});
}

namespace {

ordered_json report_to_json(const EpochReport& r) {
  ordered_json j;
  j["k"] = r.k;
  j["s_next"] = r.s_next.to_string();
  j["kappa_total"] = r.kappa_total;
  j["overflow_count"] = r.overflow_count;
  ordered_json landmarks;
  for (const auto& [name, state] : r.landmarks) {
    landmarks[name] = state.to_string();
  }
  j["landmarks"] = std::move(landmarks);
  ordered_json agree;
  for (const auto& [name, ok] : r.tiers_agree) agree[name] = ok;
  j["tiers_agree"] = std::move(agree);
  j["nprime_total"] = r.nprime_total;
  if (r.naive_step_total) {
    j["naive_step_total"] = *r.naive_step_total;
  } else {
    j["naive_step_total"] = nullptr;
  }
  return j;
}

ordered_json result_to_json(const SuiteResult& r) {
  ordered_json j;
  j["suite"] = r.name;
  j["cases"] = r.cases;
  j["passed"] = r.passed();
  ordered_json failures = ordered_json::array();
  for (const FailureRecord& f : r.failures) {
    failures.push_back({{"input", f.input},
                        {"expected", f.expected},
                        {"actual", f.actual}});
  }
  j["failures"] = std::move(failures);
  return j;
}

}  // namespace

std::string epoch_report_json(const EpochReport& report) {
  return report_to_json(report).dump(2) + "\n";
}

std::string suite_result_json(const SuiteResult& result) {
  return result_to_json(result).dump(2) + "\n";
}

std::string suite_results_json(const std::vector<SuiteResult>& results) {
  ordered_json j = ordered_json::array();
  for (const SuiteResult& r : results) j.push_back(result_to_json(r));
  return j.dump(2) + "\n";
}

void print_suite_result(std::ostream& os, const SuiteResult& result) {
  os << (result.passed() ? "[PASS] " : "[FAIL] ") << result.name << ": "
     << result.cases << " cases, " << result.failures.size() << " failures\n";
  for (const FailureRecord& f : result.failures) {
    os << "  input:    " << f.input << "\n"
       << "  expected: " << f.expected << "\n"
       << "  actual:   " << f.actual << "\n";
  }
}

}  // namespace skelet17
