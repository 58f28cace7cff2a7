#include "skelet17/epoch.hpp"

#include <span>

namespace skelet17 {

namespace {

void require(bool cond, const std::string& what) {
  if (!cond) throw VerificationError(what);
}

std::string vars_text(const StateVars& v) {
  return "(n=" + std::to_string(v.n) + ", ell=" + std::to_string(v.ell) +
         ", sigma=" + std::string(v.sigma > 0 ? "+1" : "-1") + ")";
}

}  // namespace

const char* tier_name(Tier t) {
  switch (t) {
    case Tier::kT0: return "t0";
    case Tier::kT1: return "t1";
    case Tier::kT2: return "t2";
    case Tier::kT3: return "t3";
  }
  return "?";
}

std::optional<Tier> tier_from_name(std::string_view name) {
  if (name == "t0" || name == "T0") return Tier::kT0;
  if (name == "t1" || name == "T1") return Tier::kT1;
  if (name == "t2" || name == "T2") return Tier::kT2;
  if (name == "t3" || name == "T3") return Tier::kT3;
  return std::nullopt;
}

Int next_odd_val(Int m) {
  if (m < 2 || nu2(m) % 2 == 0) {
    throw std::domain_error("next_odd_val requires m >= 2 of odd valuation");
  }
  Int candidate = m;
  do {
    candidate = checked_add(candidate, 1);
  } while (nu2(candidate) % 2 == 0);
  return candidate;
}

Segment::Segment(Int m_in, Int m_next_in) : m(m_in), m_next(m_next_in) {
  if (m < 2 || m_next <= m) throw std::domain_error("bad segment endpoints");
  if (nu2(m) % 2 == 0 || nu2(m_next) % 2 == 0) {
    throw std::domain_error("segment endpoints must have odd valuation");
  }
  for (Int e = m + 1; e < m_next; ++e) {
    if (nu2(e) % 2 == 1) {
      throw std::domain_error("segment interior contains " +
                              std::to_string(e) + " of odd valuation");
    }
  }
}

long long kappa_segment(Int m, Int m_next, int j) {
  if (j < 0) throw std::domain_error("kappa index must be >= 0");
  if (m_next <= m) throw std::domain_error("bad segment endpoints");
  if (j <= 1) return m_next - m;
  const Int q = pow2(j - 1);
  return m_next / q - m / q;
}

RootedCursor segment_jump(const RootedCursor& c, const Segment& seg) {
  const Int base = pow2(2 * c.k);
  require(c.tag == 1, "segment jump requires a 1-rooted cursor");
  require(c.h_pred == HPair(base - seg.m - 1, base + seg.m),
          "segment jump from unexpected h " + std::to_string(c.h_pred.first) +
              "," + std::to_string(c.h_pred.second) + " for m = " +
              std::to_string(seg.m));
  require(seg.m_next <= base - 2, "segment runs past the epoch range");

  RootedCursor next = c;
  std::vector<Int> low = c.state.low_order();
  for (int j = 0; j <= 2 * c.k + 1; ++j) {
    const long long cnt = kappa_segment(seg.m, seg.m_next, j);
    if (cnt == 0) continue;
    low[static_cast<std::size_t>(j)] =
        checked_add(low[static_cast<std::size_t>(j)], 2 * cnt);
    next.kappa.counts[static_cast<std::size_t>(j)] += cnt;
  }
  next.state = State::from_low_order(std::move(low));
  next.tag = 1;
  next.h_pred = {base - seg.m_next - 1, base + seg.m_next};
  next.nprime_count += 2 * seg.d();
  return next;
}

State construct_E2(int k) {
  if (k < 1) throw std::domain_error("epoch index must be >= 1");
  std::vector<Int> low(static_cast<std::size_t>(2 * k + 2));
  low[0] = checked_sub(pow2(2 * k + 1), 4);
  low[1] = checked_mul(3, pow2(2 * k));
  for (int j = 2; j <= 2 * k; ++j) {
    low[static_cast<std::size_t>(j)] =
        checked_sub(checked_mul(3, pow2(2 * k - j + 1)), 2) + 2 * (j % 2);
  }
  low[static_cast<std::size_t>(2 * k + 1)] = 2;
  return State::from_low_order(std::move(low));
}

State e_final(int k) {
  if (k < 1) throw std::domain_error("epoch index must be >= 1");
  std::vector<Int> low(static_cast<std::size_t>(2 * k + 4));
  low[0] = 0;
  low[1] = checked_sub(pow2(2 * k + 2), 4);
  for (int j = 2; j <= 2 * k; ++j) {
    low[static_cast<std::size_t>(j)] = pow2(2 * k + 3 - j) - 2 * (j % 2);
  }
  low[static_cast<std::size_t>(2 * k + 1)] = 2;
  low[static_cast<std::size_t>(2 * k + 2)] = 2;
  low[static_cast<std::size_t>(2 * k + 3)] = 0;
  return State::from_low_order(std::move(low));
}

State e_prime_final(int k) {
  if (k < 1) throw std::domain_error("epoch index must be >= 1");
  std::vector<Int> low(static_cast<std::size_t>(2 * k + 4));
  low[0] = 0;
  low[1] = checked_sub(pow2(2 * k + 2), 2);
  for (int j = 2; j <= 2 * k + 2; ++j) {
    low[static_cast<std::size_t>(j)] = pow2(2 * k + 3 - j);
  }
  low[static_cast<std::size_t>(2 * k + 3)] = 0;
  return State::from_low_order(std::move(low));
}

std::vector<long long> kappa_closed_form(int k) {
  if (k < 1) throw std::domain_error("epoch index must be >= 1");
  std::vector<long long> kappa(static_cast<std::size_t>(2 * k + 2));
  kappa[0] = pow2(2 * k) - 2;
  kappa[1] = pow2(2 * k);
  for (int j = 2; j <= 2 * k; ++j) {
    kappa[static_cast<std::size_t>(j)] = pow2(2 * k - j + 1) - 1 + (j % 2);
  }
  kappa[static_cast<std::size_t>(2 * k + 1)] = 1;
  return kappa;
}

EndgameResult endgame(const State& e2, bool batched) {
  const int ell = e2.ell();
  if (ell < 3 || ell % 2 == 0 || !is_empty(e2)) {
    throw std::domain_error("endgame requires an empty state of odd ell");
  }
  const int k = (ell - 1) / 2;
  require(e2 == construct_E2(k),
          "endgame input is not the expected boundary state: " +
              e2.to_string());

  const TransitOptions opts{.batched = batched};
  EndgameResult out{e2, false, {}, 0, 0};
  State cur = e2;

  auto event = [&]() -> RuleEvent {
    std::optional<RuleEvent> ev = advance_event(cur, opts);
    if (!ev) throw HaltEncountered(cur, out.step_count);
    out.step_count += ev->count;
    if (ev->rule == Rule::kOverflow) ++out.overflow_count;
    return *ev;
  };
  auto expect_vars = [&](Int n, int ell, int sigma, const char* where) {
    const StateVars got = state_vars(cur);
    const StateVars want{n, ell, sigma};
    require(got == want, std::string("endgame checkpoint ") + where +
                             ": expected " + vars_text(want) + ", got " +
                             vars_text(got));
  };

  RuleEvent ev = event();
  require(ev.rule == Rule::kZero, "endgame must open with Zero");
  expect_vars(checked_sub(pow2(2 * k + 1), 1), 2 * k + 3, -1, "post-Zero");

  ev = event();
  require(ev.rule == Rule::kIncrement &&
              ev.count == checked_sub(pow2(2 * k + 1), 4),
          "endgame run-down has the wrong length");
  expect_vars(3, 2 * k + 3, -1, "pre-Halve");
  require(cur.at(0) == -1, "run-down must exhaust entry 0");

  ev = event();
  require(ev.rule == Rule::kHalve, "endgame expects a single Halve");
  expect_vars(1, 2 * k + 2, +1, "post-Halve");

  ev = event();
  require(ev.rule == Rule::kIncrement &&
              ev.count == checked_sub(pow2(2 * k + 2), 2),
          "endgame run-up has the wrong length");
  expect_vars(checked_sub(pow2(2 * k + 2), 1), 2 * k + 2, +1,
              "pre-Overflow");

  ev = event();
  require(ev.rule == Rule::kOverflow, "endgame expects the epoch's Overflow");
  expect_vars(0, 2 * k + 3, -1, "post-Overflow");
  require(cur == e_final(k), "state after the Overflow is not E_k_final");
  const State e_fin = cur;

  // N' cascade from E_k_final: bumps at 2k+1, 2k-1, ..., 1.
  for (int idx = 2 * k + 1; idx >= 1; idx -= 2) {
    const TransitSummary t = next_empty(cur, opts);
    out.step_count += t.step_count;
    require(t.embanked && t.bump_index && *t.bump_index == idx,
            "cascade from E_k_final bumped index " +
                (t.bump_index ? std::to_string(*t.bump_index) : "none") +
                ", expected " + std::to_string(idx));
    if (idx == 2 * k + 1) {
      require(t.h() == HPair(checked_sub(pow2(2 * k + 2), 1),
                             checked_sub(pow2(2 * k + 2), 2)),
              "h(E_k_final) off the expected pair");
    }
    cur = t.successor;
  }
  require(cur == e_prime_final(k), "cascade did not land on E_prime_k_final");
  const State e_pf = cur;

  const TransitSummary t = next_empty(cur, opts);
  out.step_count += t.step_count;
  require(t.embanked && t.bump_index && *t.bump_index == 1,
          "final transit must bump index 1");
  cur = t.successor;
  require(cur == start_state(k + 1), "endgame did not finish on S_{k+1}");
  require(out.overflow_count == 1, "endgame must see exactly one Overflow");

  out.s_next = cur;
  out.overflow_seen = true;
  out.landmarks = {{"E_k_final", e_fin}, {"E_prime_k_final", e_pf}};
  return out;
}

namespace {

struct PhaseA {
  State e5;
  State e_prime;
  State e2;
  KappaVector kappa;
  long long nprime_total = 0;
  long long step_count = 0;
};

// T0/T1: literal transits, cascades grouped by their closing bump at 0 or 1.
PhaseA phase_a_transits(int k, bool batched) {
  const TransitOptions opts{.batched = batched};
  PhaseA out{start_state(k), start_state(k), start_state(k),
             KappaVector(2 * k + 2), 0, 0};
  State cur = start_state(k);
  std::optional<State> e5;
  State boundary = cur;
  while (true) {
    const TransitSummary t = next_empty(cur, opts);
    out.step_count += t.step_count;
    require(t.embanked && t.bump_index.has_value(),
            "pre-boundary transit not embanked from " + cur.to_string());
    out.kappa.add(*t.bump_index);
    cur = t.successor;
    if (*t.bump_index <= 1) {  // a cascade just closed
      ++out.nprime_total;
      if (out.nprime_total == 5) e5 = cur;
      if (!weak_bounds(cur)) {
        require(e5.has_value(), "bounds failed before five cascades");
        out.e5 = *e5;
        out.e_prime = boundary;
        out.e2 = cur;
        return out;
      }
      boundary = cur;
    }
  }
}

// T2: iterated cascades under the bump algebra.
PhaseA phase_a_cursor(int k, bool check) {
  RootedCursor c = seed_cursor(k);
  std::optional<State> e5;
  State boundary = c.state;
  while (weak_bounds(c.state)) {
    boundary = c.state;
    c = nprime_step(c, check);
    if (c.nprime_count == 5) e5 = c.state;
  }
  require(e5.has_value(), "bounds failed before five cascades");
  require(c.state == bump(boundary, 1),
          "the last cascade before the boundary must be a single bump at 1");
  return PhaseA{*e5, boundary, c.state, c.kappa, c.nprime_count, 0};
}

// T3: five cascades, the closed-form segment sweep, one final cascade.
PhaseA phase_a_segments(int k, bool check) {
  RootedCursor c = seed_cursor(k);
  for (int i = 0; i < 4; ++i) c = nprime_step(c, check);
  const Int base = pow2(2 * k);
  require(c.tag == 1 && c.h_pred == HPair(base - 3, base + 2),
          "five cascades from S_k must reach h = (2^2k - 3, 2^2k + 2)");
  const State e5 = c.state;

  Int m = 2;
  const Int m_end = base - 2;
  while (m < m_end) {
    const Int m_next = next_odd_val(m);
    require(m_next <= m_end, "segment sweep overran the epoch range");
    c = segment_jump(c, Segment(m, m_next));
    m = m_next;
  }
  require(c.h_pred == HPair(1, checked_sub(pow2(2 * k + 1), 2)),
          "segment sweep must end at h = (1, 2^(2k+1) - 2)");
  const State e_prime = c.state;

  c = nprime_step(c, check);
  require(c.state == bump(e_prime, 1),
          "the final cascade must be a single bump at 1");
  return PhaseA{e5, e_prime, c.state, c.kappa, c.nprime_count, 0};
}

}  // namespace

EpochReport run_epoch(int k, Tier tier, bool check) {
  if (k < 1) throw std::domain_error("epoch index must be >= 1");

  PhaseA a = [&] {
    switch (tier) {
      case Tier::kT0: return phase_a_transits(k, /*batched=*/false);
      case Tier::kT1: return phase_a_transits(k, /*batched=*/true);
      case Tier::kT2: return phase_a_cursor(k, check);
      case Tier::kT3: return phase_a_segments(k, check);
    }
    throw std::domain_error("unknown tier");
  }();

  std::vector<std::pair<std::string, bool>> checks;

  require(!weak_bounds(a.e2) && weak_bounds(a.e_prime),
          "boundary states out of order");
  require(a.e2 == construct_E2(k),
          "first out-of-bounds state differs from its closed form");
  checks.emplace_back("e2_closed_form", true);

  require(a.kappa.counts == kappa_closed_form(k),
          "kappa totals differ from the closed form");
  checks.emplace_back("kappa_closed_form", true);

  const EndgameResult end = endgame(a.e2, /*batched=*/tier != Tier::kT0);
  checks.emplace_back("endgame_landmarks", true);

  require(end.s_next == start_state(k + 1), "epoch did not finish on S_{k+1}");
  checks.emplace_back("s_next_closed_form", true);
  require(end.overflow_count == 1, "epoch must use exactly one Overflow");
  checks.emplace_back("one_overflow", true);

  std::vector<std::pair<std::string, State>> landmarks = {
      {"E_after_5_nprime", a.e5},
      {"E_prime", a.e_prime},
      {"E_double_prime", a.e2}};
  landmarks.insert(landmarks.end(), end.landmarks.begin(),
                   end.landmarks.end());

  std::optional<long long> naive_steps;
  if (tier == Tier::kT0 || tier == Tier::kT1) {
    naive_steps = a.step_count + end.step_count;
  }
  return EpochReport{k,
                     end.s_next,
                     a.kappa.counts,
                     end.overflow_count,
                     std::move(landmarks),
                     std::move(checks),
                     a.nprime_total,
                     naive_steps};
}

NonhaltSummary prove_nonhalt(int k_max, Tier tier, bool check) {
  std::vector<Tier> tiers(static_cast<std::size_t>(k_max > 0 ? k_max : 0),
                          tier);
  return prove_nonhalt(tiers, check);
}

NonhaltSummary prove_nonhalt(std::span<const Tier> tier_per_k, bool check) {
  if (tier_per_k.empty()) {
    throw std::domain_error("prove_nonhalt requires k_max >= 1");
  }
  NonhaltSummary out;
  out.k_max = static_cast<int>(tier_per_k.size());
  for (int k = 1; k <= out.k_max; ++k) {
    EpochReport r =
        run_epoch(k, tier_per_k[static_cast<std::size_t>(k - 1)], check);
    require(r.s_next == start_state(k + 1),
            "epoch " + std::to_string(k) + " does not seed epoch " +
                std::to_string(k + 1));
    out.total_overflows += r.overflow_count;
    out.reports.push_back(std::move(r));
  }
  return out;
}

}  // namespace skelet17
