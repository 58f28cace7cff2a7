#include "skelet17/machine.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

namespace skelet17 {

const char* rule_name(Rule r) {
  switch (r) {
    case Rule::kOverflow:  return "Overflow";
    case Rule::kHalt:      return "Halt";
    case Rule::kZero:      return "Zero";
    case Rule::kHalve:     return "Halve";
    case Rule::kIncrement: return "Increment";
  }
  return "?";
}

State::State(std::vector<Int> display_order) : low_(std::move(display_order)) {
  std::reverse(low_.begin(), low_.end());
  validate();
}

State::State(LowOrderTag, std::vector<Int> low) : low_(std::move(low)) {
  validate();
}

State State::from_low_order(std::vector<Int> low) {
  return State(LowOrderTag{}, std::move(low));
}

void State::validate() const {
  if (low_.size() < 2) {
    throw std::invalid_argument("state needs at least two entries");
  }
  if (low_[0] < -1) {
    throw std::invalid_argument("entry 0 must be >= -1, got " +
                                std::to_string(low_[0]));
  }
  for (std::size_t i = 1; i < low_.size(); ++i) {
    if (low_[i] < 0) {
      throw std::invalid_argument("entry " + std::to_string(i) +
                                  " must be >= 0, got " +
                                  std::to_string(low_[i]));
    }
  }
}

State State::parse(std::string_view text) {
  std::vector<Int> entries;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    std::string_view tok = text.substr(pos, comma - pos);
    Int value = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc{} || ptr != tok.data() + tok.size() || tok.empty()) {
      throw std::invalid_argument("bad state entry '" + std::string(tok) +
                                  "' in \"" + std::string(text) + "\"");
    }
    entries.push_back(value);
    pos = comma + 1;
    if (comma == text.size()) break;
  }
  return State(std::move(entries));
}

Int State::at(int i) const {
  if (i < 0 || i > ell()) {
    throw std::domain_error("entry index " + std::to_string(i) +
                            " out of range for ell=" + std::to_string(ell()));
  }
  return low_[static_cast<std::size_t>(i)];
}

State State::with_bump(int i) const {
  if (i < 0 || i > ell()) {
    throw std::domain_error("bump index " + std::to_string(i) +
                            " out of range for ell=" + std::to_string(ell()));
  }
  State out = *this;
  out.low_[static_cast<std::size_t>(i)] =
      checked_add(out.low_[static_cast<std::size_t>(i)], 2);
  return out;
}

std::string State::to_string() const {
  std::ostringstream os;
  for (std::size_t i = low_.size(); i-- > 0;) {
    os << low_[i];
    if (i != 0) os << ',';
  }
  return os.str();
}

StateVars state_vars(const State& s) {
  const auto& a = s.low_order();
  const int ell = s.ell();
  if (ell > 62) throw OverflowError("state too long for word-sized n");
  std::vector<std::uint8_t> digits(static_cast<std::size_t>(ell));
  int parity = static_cast<int>(a[0] & 1);
  for (int i = 1; i <= ell; ++i) {
    const int p = static_cast<int>(a[static_cast<std::size_t>(i)] & 1);
    digits[static_cast<std::size_t>(i - 1)] = static_cast<std::uint8_t>(p);
    parity ^= p;
  }
  return StateVars{gray_decode(digits), ell, parity ? +1 : -1};
}

Rule classify(const State& s) {
  const auto& a = s.low_order();
  const std::size_t len = a.size();
  bool rest_even = true;  // all entries below the leading one
  for (std::size_t i = 0; i + 1 < len; ++i) {
    if (a[i] & 1) {
      rest_even = false;
      break;
    }
  }
  const bool leading_odd = (a[len - 1] & 1) != 0;
  if (leading_odd && rest_even) return Rule::kOverflow;
  if (!leading_odd && rest_even) {
    // All entries are even. The guard on the zero rule: the two leading
    // entries must not both be zero (the halt pattern's complement). Reading
    // the guard as the low-order pair instead would let halt states fall
    // through and would break the jump of n to 2^ell - 1.
    if (a[len - 1] == 0 && a[len - 2] == 0) return Rule::kHalt;
    return Rule::kZero;
  }
  if (a[0] == -1) return Rule::kHalve;
  return Rule::kIncrement;
}

std::optional<State> step(const State& s) {
  std::vector<Int> a = s.low_order();
  switch (classify(s)) {
    case Rule::kOverflow:
      a.back() = checked_add(a.back(), 1);
      a.push_back(0);
      break;
    case Rule::kHalt:
      return std::nullopt;
    case Rule::kZero:
      a.back() = checked_add(a.back(), 1);
      a[0] = checked_sub(a[0], 1);
      a.push_back(0);
      a.push_back(0);
      break;
    case Rule::kHalve:
      if (a[0] != -1) {
        throw std::logic_error("halve selected with entry 0 != -1");
      }
      a.erase(a.begin());
      break;
    case Rule::kIncrement: {
      std::size_t i = 0;
      while ((a[i] & 1) == 0) ++i;
      // i = ell would be the overflow pattern, which classify already took.
      if (i + 1 >= a.size()) {
        throw std::logic_error("increment reached the leading entry");
      }
      a[i + 1] = checked_add(a[i + 1], 1);
      a[0] = checked_sub(a[0], 1);
      break;
    }
  }
  return State::from_low_order(std::move(a));
}

bool is_empty(const State& s) {
  if (classify(s) != Rule::kZero) return false;
  const StateVars v = state_vars(s);
  return v.n == 0 && v.sigma == -1;
}

State start_state(int k) {
  if (k < 1) throw std::domain_error("epoch index must be >= 1");
  std::vector<Int> low(static_cast<std::size_t>(2 * k + 2));
  low[0] = 0;
  for (int i = 1; i <= 2 * k; ++i) {
    low[static_cast<std::size_t>(i)] = pow2(2 * k + 1 - i);
  }
  low[static_cast<std::size_t>(2 * k + 1)] = 0;
  return State::from_low_order(std::move(low));
}

RunOutcome run_naive(const State& start, long long max_steps,
                     TraceSink* sink) {
  RunOutcome out{false, start, 0, {}};
  StateVars vars;
  if (sink) vars = state_vars(out.state);
  for (long long i = 0; i < max_steps; ++i) {
    const Rule rule = classify(out.state);
    std::optional<State> next = step(out.state);
    if (!next) {
      out.halted = true;
      return out;
    }
    switch (rule) {
      case Rule::kOverflow:  ++out.counts.overflow; break;
      case Rule::kZero:      ++out.counts.zero; break;
      case Rule::kHalve:     ++out.counts.halve; break;
      case Rule::kIncrement: ++out.counts.increment; break;
      case Rule::kHalt:      break;
    }
    out.state = std::move(*next);
    ++out.steps_done;
    if (sink) {
      StepEvent ev;
      ev.index = out.steps_done;
      ev.rule = rule;
      ev.before = vars;
      ev.after = state_vars(out.state);
      ev.state_after = &out.state;
      sink->on_step(ev);
      vars = ev.after;
    }
  }
  return out;
}

}  // namespace skelet17
