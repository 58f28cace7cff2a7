#include "skelet17/accel.hpp"

namespace skelet17 {

namespace {

void require(bool cond, const std::string& what) {
  if (!cond) throw VerificationError(what);
}

}  // namespace

HaltEncountered::HaltEncountered(State state, long long at_step)
    : std::runtime_error("halt rule reached at step " +
                         std::to_string(at_step) + " from state " +
                         state.to_string()),
      state_(std::move(state)),
      at_step_(at_step) {}

BatchResult batch_increments(const State& s) {
  if (classify(s) != Rule::kIncrement) {
    throw std::domain_error("batch_increments requires an Increment state: " +
                            s.to_string());
  }
  const StateVars v = state_vars(s);
  const Int to_boundary =
      v.sigma > 0 ? checked_sub(checked_sub(pow2(v.ell), 1), v.n) : v.n;
  const Int by_exhaustion = checked_add(s.at(0), 1);
  require(to_boundary != by_exhaustion,
          "increment run stop reasons tied, which parity forbids: " +
              s.to_string());
  const Int count = std::min(by_exhaustion, to_boundary);
  require(count >= 1, "empty increment run from " + s.to_string());

  const Int n_next = v.n + (v.sigma > 0 ? count : -count);
  std::vector<Int> low = s.low_order();
  low[0] = checked_sub(low[0], count);
  for (int i = 1; i <= v.ell; ++i) {
    low[static_cast<std::size_t>(i)] =
        checked_add(low[static_cast<std::size_t>(i)], d_j(i, v.n, n_next));
  }
  BatchResult out{State::from_low_order(std::move(low)), count};
  require(classify(out.state) != Rule::kIncrement,
          "increment batch did not reach a run boundary");
  return out;
}

HPair TransitSummary::h() const {
  if (!h1 || !h2) {
    throw std::logic_error("transit saw fewer than two Halve rules");
  }
  return {*h1, *h2};
}

HPair TransitSummary::s() const {
  if (!s1 || !s2) {
    throw std::logic_error("transit saw fewer than two Halve rules");
  }
  return {*s1, *s2};
}

std::optional<RuleEvent> advance_event(State& s, const TransitOptions& opts) {
  const Rule rule = classify(s);
  if (rule == Rule::kHalt) return std::nullopt;
  if (rule != Rule::kIncrement) {
    s = *step(s);
    return RuleEvent{rule, 1};
  }
  if (opts.batched) {
    BatchResult batch = batch_increments(s);
    if (opts.verify_batches) {
      State replay = s;
      for (Int i = 0; i < batch.count; ++i) {
        require(classify(replay) == Rule::kIncrement,
                "batched run longer than the single-step run from " +
                    s.to_string());
        replay = *step(replay);
      }
      require(replay == batch.state,
              "batched increment run diverged from single steps: " +
                  batch.state.to_string() + " vs " + replay.to_string());
    }
    s = std::move(batch.state);
    return RuleEvent{rule, batch.count};
  }
  Int count = 0;
  do {
    s = *step(s);
    ++count;
  } while (classify(s) == Rule::kIncrement);
  return RuleEvent{rule, count};
}

namespace {

// Detects the bumped-entry shape: successor == base[i] for exactly one i.
std::optional<int> detect_bump(const State& base, const State& successor) {
  if (base.size() != successor.size()) return std::nullopt;
  std::optional<int> found;
  for (int i = 0; i <= base.ell(); ++i) {
    const Int delta = successor.at(i) - base.at(i);
    if (delta == 0) continue;
    if (delta != 2 || found) return std::nullopt;
    found = i;
  }
  return found;
}

}  // namespace

TransitSummary next_empty(const State& empty_state,
                          const TransitOptions& opts) {
  if (!is_empty(empty_state)) {
    throw std::domain_error("next_empty requires an empty state, got " +
                            empty_state.to_string());
  }
  if (opts.sink && opts.batched) {
    throw std::invalid_argument("a per-step sink requires batched = false");
  }

  State cur = empty_state;
  TransitSummary sum(cur);
  long long steps = 0;
  bool clean_so_far = true;  // nothing but the leading Zero and Increments
  StateVars vars;
  if (opts.sink) vars = state_vars(cur);

  auto apply_one = [&](Rule rule) {
    State next = *step(cur);
    ++steps;
    if (opts.sink) {
      StepEvent ev;
      ev.index = steps;
      ev.rule = rule;
      ev.before = vars;
      ev.after = state_vars(next);
      ev.state_after = &next;
      opts.sink->on_step(ev);
      vars = ev.after;
    }
    cur = std::move(next);
  };

  apply_one(Rule::kZero);  // an empty state always starts with Zero

  while (true) {
    if (steps > opts.max_steps) {
      throw std::runtime_error("transit exceeded the step budget from " +
                               empty_state.to_string());
    }
    const Rule rule = classify(cur);
    if (rule == Rule::kHalt) throw HaltEncountered(cur, steps);
    if (rule == Rule::kZero) break;  // the next empty state

    if (rule == Rule::kHalve) {
      const Int n_before = state_vars(cur).n;
      apply_one(rule);
      const Int n_after = state_vars(cur).n;
      if (sum.halve_count == 0) {
        sum.s1 = n_before;
        sum.h1 = n_after;
      } else if (sum.halve_count == 1) {
        sum.s2 = n_before;
        sum.h2 = n_after;
        sum.weakly_embanked = clean_so_far;
      }
      ++sum.halve_count;
    } else if (rule == Rule::kOverflow) {
      if (sum.halve_count < 2) clean_so_far = false;
      sum.saw_overflow = true;
      apply_one(rule);
    } else {  // a maximal Increment run
      if (opts.batched) {
        State run_state = cur;
        RuleEvent ev = *advance_event(run_state, opts);
        steps += ev.count;
        cur = std::move(run_state);
      } else {
        do {
          apply_one(rule);
        } while (classify(cur) == Rule::kIncrement &&
                 steps <= opts.max_steps);
      }
    }
  }

  sum.successor = cur;
  sum.step_count = steps;
  sum.embanked =
      sum.weakly_embanked && sum.halve_count == 2 && !sum.saw_overflow;
  sum.bump_index = detect_bump(empty_state, cur);
  return sum;
}

bool weak_bounds(const State& empty_state) {
  if (!is_empty(empty_state)) {
    throw std::domain_error("weak_bounds requires an empty state, got " +
                            empty_state.to_string());
  }
  const int ell = empty_state.ell();
  if (ell % 2 == 0) {
    throw std::domain_error("no epoch index for even ell = " +
                            std::to_string(ell));
  }
  return empty_state.at(0) < checked_sub(pow2(ell), 1) &&
         empty_state.at(1) < checked_sub(checked_mul(3, pow2(ell - 1)), 1);
}

State bump(const State& s, int i) { return s.with_bump(i); }

namespace {

HPair adjust_h(const HPair& h, int i) {
  if (i == 0) return {h.first - 1, h.second};
  if (i == 1) return {h.first, checked_add(h.second, 1)};
  return h;
}

}  // namespace

std::pair<HPair, HPair> h_after_bump(const HPair& h, const HPair& s, int i) {
  if (i < 0) throw std::domain_error("bump index must be >= 0");
  if (i == 0) return {{h.first - 1, h.second}, {s.first - 2, s.second}};
  if (i == 1) {
    return {{h.first, checked_add(h.second, 1)},
            {s.first, checked_add(s.second, 2)}};
  }
  return {h, s};
}

int next_bump_index(int tag, const HPair& h_pred) {
  if (tag == 0) {
    if (h_pred.first < 1) {
      throw std::domain_error(
          "next bump undefined: 0-rooted state with h_1 = " +
          std::to_string(h_pred.first));
    }
    return nu2(h_pred.first);
  }
  if (tag == 1) return nu2(checked_add(h_pred.second, 1)) + 1;
  throw std::domain_error("root tag must be 0 or 1, got " +
                          std::to_string(tag));
}

void KappaVector::add(int j) {
  if (j < 0 || static_cast<std::size_t>(j) >= counts.size()) {
    throw std::domain_error("kappa index " + std::to_string(j) +
                            " out of range");
  }
  ++counts[static_cast<std::size_t>(j)];
}

RootedCursor seed_cursor(int k) {
  if (k < 1) throw std::domain_error("epoch index must be >= 1");
  const State sk = start_state(k);
  const TransitSummary obs = next_empty(sk);
  const HPair expected_h{checked_sub(pow2(2 * k), 1), pow2(2 * k)};
  require(obs.embanked, "seed transit of S_" + std::to_string(k) +
                            " is not embanked");
  require(obs.h() == expected_h,
          "seed transit h mismatch for S_" + std::to_string(k));
  require(obs.bump_index && *obs.bump_index == 2 * k + 1,
          "seed transit of S_" + std::to_string(k) +
              " did not bump index 2k+1");
  require(bump(sk, 2 * k + 1) == obs.successor,
          "seed successor is not S_k[2k+1]");

  RootedCursor cur{sk, 1, expected_h, k, KappaVector(2 * k + 2), 1};
  State st = sk;
  for (int idx = 2 * k + 1; idx >= 1; idx -= 2) {
    st = bump(st, idx);
    cur.kappa.add(idx);
    if (idx >= 2 && !weak_bounds(st)) {
      throw VerificationError("seed cascade left the weak-embankment bounds");
    }
  }
  cur.state = std::move(st);
  return cur;
}

RootedCursor nprime_step(const RootedCursor& c, bool check) {
  if (check && !weak_bounds(c.state)) {
    throw std::domain_error(
        "cursor state fails the weak-embankment bounds; the explicit path "
        "must take over: " +
        c.state.to_string());
  }
  const int j = next_bump_index(c.tag, c.h_pred);
  if (j > c.state.ell()) {
    throw VerificationError("predicted bump index " + std::to_string(j) +
                            " beyond ell for " + c.state.to_string());
  }
  RootedCursor next = c;
  State st = c.state;
  for (int idx = j; idx >= 0; idx -= 2) {
    st = bump(st, idx);
    next.kappa.add(idx);
    if (check && idx >= 2 && !weak_bounds(st)) {
      throw VerificationError(
          "cascade intermediate left the weak-embankment bounds: " +
          st.to_string());
    }
  }
  next.state = std::move(st);
  next.tag = j % 2;
  next.h_pred = adjust_h(c.h_pred, c.tag);
  ++next.nprime_count;
  return next;
}

}  // namespace skelet17
