#include "qcc/algorithm.hpp"

#include "qcc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qcc {

QccParams QccParams::make(int n, int k, double delta) {
  if (n < 3) throw Error(ErrorCode::DomainError, "n must be >= 3, got " + std::to_string(n));
  if (!(k > 1 && k < n)) {
    throw Error(ErrorCode::DomainError, "k must satisfy 1 < k < n, got k=" + std::to_string(k));
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw Error(ErrorCode::DomainError, "delta must lie in (0, 1), got " + std::to_string(delta));
  }
  return QccParams{n, k, delta};
}

const char* to_string(Branch b) { return b == Branch::Classical ? "classical" : "complement"; }

const char* to_string(Engine e) { return e == Engine::Categorical ? "categorical" : "statevec"; }

SampleBudget sample_budget(const QccParams& params) {
  const double k = params.k;
  const double m = params.m();
  if (!in_complement_regime(params.n, params.k)) {
    const double raw = k * std::log(k) + k * std::log(1.0 / params.delta);
    return {Branch::Classical, static_cast<long>(std::ceil(raw))};
  }
  const double raw = k * std::log(m) + k * (1.0 - std::log(params.delta));
  return {Branch::Complement, static_cast<long>(std::ceil(raw))};
}

LearnerState::LearnerState(int n) : guess_(n, 0), open_(n, 1) {}

LearnerState::LearnerState(int n, const Subset& guess) : LearnerState(n) {
  for (int x : make_subset(guess, n)) add(x);
}

Subset LearnerState::guess() const {
  Subset out;
  for (int i = 0; i < n(); ++i) {
    if (guess_[i]) out.push_back(i);
  }
  return out;
}

Subset LearnerState::open() const {
  Subset out;
  for (int i = 0; i < n(); ++i) {
    if (open_[i]) out.push_back(i);
  }
  return out;
}

void LearnerState::add(int x) {
  guess_[x] = 1;
  open_[x] = 0;
}

void LearnerState::remove(int x) {
  guess_[x] = 0;
  open_[x] = 1;
}

void LearnerState::check_partition() const {
  if (guess_.size() != open_.size()) throw Error(ErrorCode::InvariantViolation, "G/U size mismatch");
  for (std::size_t i = 0; i < guess_.size(); ++i) {
    if ((guess_[i] != 0) == (open_[i] != 0)) {
      throw Error(ErrorCode::InvariantViolation,
                  "G and U do not partition [n] at element " + std::to_string(i));
    }
  }
}

std::pair<int, int> LearnerState::walk_point(const std::vector<char>& in_s) const {
  int j = 0;
  int l = 0;
  for (int i = 0; i < n(); ++i) {
    if (in_s[i] && guess_[i]) ++j;
    if (!in_s[i] && !guess_[i]) ++l;
  }
  return {j, l};
}

namespace {

// The four cells of [n] cut by G and S; the categorical engine only ever
// needs a uniform element of one cell.
struct Pools {
  std::vector<int> rogue;        // G n S
  std::vector<int> free_s;       // U n S
  std::vector<int> uncollected;  // U \ S
  std::vector<int> collected;    // G \ S
  int k = 0;

  Pools(const LearnerState& state, const std::vector<char>& in_s) {
    for (int i = 0; i < state.n(); ++i) {
      const bool g = state.in_guess(i);
      if (in_s[i]) {
        (g ? rogue : free_s).push_back(i);
      } else {
        (g ? collected : uncollected).push_back(i);
      }
    }
    k = static_cast<int>(rogue.size() + free_s.size());
  }

  static int take(std::vector<int>& pool, RandomStream& rng) {
    if (pool.empty()) throw Error(ErrorCode::DegenerateBranch, "sampled an event with an empty pool");
    const auto idx = static_cast<std::size_t>(rng.uniform_index(pool.size()));
    const int x = pool[idx];
    pool[idx] = pool.back();
    pool.pop_back();
    return x;
  }

  Event step(RandomStream& rng) {
    const int j = static_cast<int>(rogue.size());
    const int l = static_cast<int>(uncollected.size());
    const auto d = transition_distribution<double>(k, j, l);
    const double u = rng.uniform01();
    double cumulative = 0.0;
    Event event = Event::NoOp;
    for (Event e : {Event::RogueRemoved, Event::RogueAdded, Event::CouponCollected}) {
      cumulative += d[e];
      if (u < cumulative) {
        event = e;
        break;
      }
    }
    switch (event) {
      case Event::RogueRemoved: free_s.push_back(take(rogue, rng)); break;
      case Event::RogueAdded: rogue.push_back(take(free_s, rng)); break;
      case Event::CouponCollected: collected.push_back(take(uncollected, rng)); break;
      case Event::NoOp: break;
    }
    return event;
  }

  LearnerState to_state(int n) const {
    LearnerState state(n);
    for (int x : rogue) state.add(x);
    for (int x : collected) state.add(x);
    return state;
  }
};

// Performs the measurement sequence of one iteration on psi_S and applies it.
Event statevec_step(LearnerState& state, const Subset& s, const std::vector<char>& in_s,
                    RandomStream& rng) {
  const int n = state.n();
  const auto psi_s = uniform_state<Complex>(s, n);
  const Subset guess = state.guess();
  const auto first = measure(psi_s, Projector<Complex>::onto_subset(guess, n), rng);
  if (first.outcome == 0) {
    // Residual is psi_{G n S}; G n S is nonempty or this branch had weight 0.
    const int x = measure_computational(first.residual, rng);
    if (!state.in_guess(x) || !in_s[x]) {
      throw Error(ErrorCode::InvariantViolation, "rogue measurement returned a non-rogue element");
    }
    state.remove(x);
    return Event::RogueRemoved;
  }
  const Subset open = state.open();
  if (open.empty()) return Event::NoOp;
  const auto second = measure(first.residual, Projector<Complex>::onto_state(uniform_state<Complex>(open, n)), rng);
  if (second.outcome == 0) return Event::NoOp;
  const int x = measure_computational(second.residual, rng);
  if (state.in_guess(x)) throw Error(ErrorCode::InvariantViolation, "added element already in G");
  state.add(x);
  return in_s[x] ? Event::RogueAdded : Event::CouponCollected;
}

void check_transition(std::pair<int, int> before, std::pair<int, int> after, Event event) {
  const int dj = after.first - before.first;
  const int dl = after.second - before.second;
  bool ok = false;
  switch (event) {
    case Event::RogueRemoved: ok = dj == -1 && dl == 0; break;
    case Event::RogueAdded: ok = dj == 1 && dl == 0; break;
    case Event::CouponCollected: ok = dj == 0 && dl == -1; break;
    case Event::NoOp: ok = dj == 0 && dl == 0; break;
  }
  if (!ok) {
    throw Error(ErrorCode::InvariantViolation,
                std::string("walk step inconsistent with event ") + to_string(event));
  }
}

std::pair<int, int> apply_event(std::pair<int, int> p, Event e) {
  switch (e) {
    case Event::RogueRemoved: --p.first; break;
    case Event::RogueAdded: ++p.first; break;
    case Event::CouponCollected: --p.second; break;
    case Event::NoOp: break;
  }
  return p;
}

void finish_complement_record(TrialRecord& record, const LearnerState& state, const Subset& s,
                              const std::vector<char>& in_s) {
  state.check_partition();
  const auto [j, l] = state.walk_point(in_s);
  record.final_distance = j + l;
  record.output_set = state.open();
  const bool by_guess = state.guess() == complement(s, state.n());
  const bool by_walk = j + l == 0;
  const bool by_output = record.output_set == s;
  if (by_guess != by_walk || by_walk != by_output) {
    throw Error(ErrorCode::InvariantViolation, "success criteria disagree");
  }
  record.success = by_guess;
}

}  // namespace

std::pair<Event, LearnerState> step(const LearnerState& state, const Subset& s, RandomStream& rng,
                                    Engine engine) {
  state.check_partition();
  const int n = state.n();
  const auto in_s = to_mask(make_subset(s, n), n);
  const auto before = state.walk_point(in_s);
  Event event;
  LearnerState next = state;
  if (engine == Engine::Categorical) {
    Pools pools(state, in_s);
    event = pools.step(rng);
    next = pools.to_state(n);
  } else {
    event = statevec_step(next, s, in_s, rng);
  }
  next.check_partition();
  check_transition(before, next.walk_point(in_s), event);
  return {event, std::move(next)};
}

TrialRecord run_classical_branch(const Subset& s, long samples, RandomStream& rng) {
  if (s.empty()) throw Error(ErrorCode::EmptySubset, "hidden set is empty");
  const auto k = static_cast<std::uint64_t>(s.size());
  std::vector<char> seen(s.size(), 0);
  std::size_t distinct = 0;
  for (long t = 0; t < samples; ++t) {
    const auto idx = rng.uniform_index(k);
    if (!seen[idx]) {
      seen[idx] = 1;
      ++distinct;
    }
  }
  TrialRecord record;
  record.iterations = samples;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (seen[i]) record.output_set.push_back(s[i]);
  }
  record.final_distance = static_cast<int>(s.size() - distinct);
  record.success = distinct == s.size();
  return record;
}

TrialRecord run_complement_branch(const Subset& s, LearnerState start, long samples,
                                  RandomStream& rng, const TrialOptions& options) {
  const int n = start.n();
  start.check_partition();
  const auto in_s = to_mask(make_subset(s, n), n);
  TrialRecord record;
  record.iterations = samples;
  auto point = start.walk_point(in_s);
  if (options.record_trajectory) {
    record.walk.reserve(static_cast<std::size_t>(samples) + 1);
    record.events.reserve(static_cast<std::size_t>(samples));
    record.walk.push_back(point);
  }

  LearnerState state = std::move(start);
  if (options.engine == Engine::Categorical) {
    Pools pools(state, in_s);
    for (long t = 0; t < samples; ++t) {
      const Event e = pools.step(rng);
      point = apply_event(point, e);
      if (options.record_trajectory) {
        record.events.push_back(e);
        record.walk.push_back(point);
      }
    }
    state = pools.to_state(n);
    if (state.walk_point(in_s) != point) {
      throw Error(ErrorCode::InvariantViolation, "categorical pools drifted from the walk");
    }
  } else {
    for (long t = 0; t < samples; ++t) {
      const Event e = statevec_step(state, s, in_s, rng);
      const auto next = apply_event(point, e);
      check_transition(point, state.walk_point(in_s), e);
      point = next;
      if (options.record_trajectory) {
        record.events.push_back(e);
        record.walk.push_back(point);
      }
    }
  }
  finish_complement_record(record, state, s, in_s);
  return record;
}

TrialRecord run_complement_branch(const QccParams& params, const Subset& s, long samples,
                                  RandomStream& rng, const TrialOptions& options) {
  if (!in_complement_regime(params.n, params.k)) {
    throw Error(ErrorCode::RegimeViolation, "complement branch needs 3m ln(e m) <= n");
  }
  if (static_cast<int>(s.size()) != params.k) {
    throw Error(ErrorCode::DomainError, "hidden set size differs from k");
  }
  return run_complement_branch(s, LearnerState(params.n), samples, rng, options);
}

TrialRecord run_trial(const QccParams& params, const Subset& s, RandomStream& rng,
                      const TrialOptions& options, long samples) {
  const auto budget = sample_budget(params);
  const long used = samples > 0 ? samples : budget.samples;
  if (budget.branch == Branch::Classical) return run_classical_branch(s, used, rng);
  return run_complement_branch(params, s, used, rng, options);
}

}  // namespace qcc
