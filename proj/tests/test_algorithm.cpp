#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qcc/errors.hpp"
#include "qcc/algorithm.hpp"
#include "qcc/trials.hpp"

#include <cmath>

using namespace qcc;

namespace {

Rational R(long a, long b = 1) { return Rational(a, b); }

// Guess with j elements of S and c complement elements.
LearnerState guess_with(const Subset& s, int n, int j, int c) {
  LearnerState g(n);
  const auto in_s = to_mask(s, n);
  for (int x = 0; x < n && j > 0; ++x) {
    if (in_s[x]) {
      g.add(x);
      --j;
    }
  }
  for (int x = 0; x < n && c > 0; ++x) {
    if (!in_s[x]) {
      g.add(x);
      --c;
    }
  }
  return g;
}

}  // namespace

TEST_CASE("QccParams domain") {
  CHECK_THROWS_AS(QccParams::make(2, 1, 0.1), Error);
  CHECK_THROWS_AS(QccParams::make(10, 1, 0.1), Error);
  CHECK_THROWS_AS(QccParams::make(10, 10, 0.1), Error);
  CHECK_THROWS_AS(QccParams::make(10, 5, 1.0), Error);
  CHECK_THROWS_AS(QccParams::make(10, 5, 0.0), Error);
  CHECK(QccParams::make(10, 8, 0.1).m() == 2);
}

TEST_CASE("sample_budget") {
  const auto a = sample_budget(QccParams::make(10, 8, 0.1));
  CHECK(a.branch == Branch::Classical);
  CHECK(a.samples == 36);

  const auto b = sample_budget(QccParams::make(100, 98, 0.1));
  CHECK(b.branch == Branch::Complement);
  CHECK(b.samples == 392);

  for (double delta : {0.5, 0.1, 0.01}) {
    const auto c = sample_budget(QccParams::make(100, 99, delta));
    CHECK(c.branch == Branch::Complement);
    CHECK(c.samples == static_cast<long>(std::ceil(99 * (1.0 + std::log(1.0 / delta)))));
  }
}

TEST_CASE("classical branch basics") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    RandomStream rng(seed);
    const auto one = run_classical_branch({3}, 1, rng);
    CHECK(one.success);
    CHECK(one.output_set == Subset{3});
    const auto two = run_classical_branch({1, 4}, 1, rng);
    CHECK_FALSE(two.success);
    CHECK(two.output_set.size() == 1);
    CHECK(two.final_distance == 1);
  }
  const auto est = estimate_probability(5000, 4, [](RandomStream& rng, long) {
    const Subset s = random_subset(10, 8, rng);
    return run_classical_branch(s, 36, rng).success;
  });
  CHECK(1.0 - est.rate() <= 0.1 + 3.0 * std::sqrt(0.1 * 0.9 / 5000));
}

TEST_CASE("absorbing state: G already equals the complement") {
  const int n = 6;
  const Subset s{0, 1, 2, 3, 4};
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    RandomStream rng(seed);
    for (Engine engine : {Engine::Categorical, Engine::StateVector}) {
      const auto rec = run_complement_branch(s, LearnerState(n, {5}), 25, rng, {engine, true});
      CHECK(rec.success);
      CHECK(rec.output_set == s);
      for (Event e : rec.events) CHECK(e == Event::NoOp);
      for (auto p : rec.walk) CHECK(p == std::pair{0, 0});
    }
  }
}

TEST_CASE("first event from G = {} with n = 4, k = 3") {
  const auto d = measured_event_distribution<Rational>({}, {0, 1, 2}, 4);
  CHECK(d.rogue_removed == 0);
  CHECK(d.coupon_collected == R(3, 16));
  CHECK(d.rogue_added == R(1, 16));
  CHECK(d.no_op == R(3, 4));
}

TEST_CASE("step examples") {
  const int n = 4;
  const Subset s{0, 1, 2};
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    RandomStream rng(seed);
    const auto [e, next] = step(LearnerState(n), s, rng, Engine::StateVector);
    CHECK(e != Event::RogueRemoved);
    RandomStream rng2(seed);
    const auto [e2, next2] = step(LearnerState(n, s), s, rng2, Engine::StateVector);
    CHECK(e2 == Event::RogueRemoved);
    CHECK(next2.guess().size() == 2);
  }
  // k = 2, j = 1, l = 1: S = {0, 1}, complement {2, 3}, G = {0, 2}.
  const auto d = measured_event_distribution<Rational>({0, 2}, {0, 1}, 4);
  CHECK(d.rogue_removed == R(1, 2));
  CHECK(d.rogue_added == R(1, 8));
  CHECK(d.coupon_collected == R(1, 8));
  CHECK(d.no_op == R(1, 4));
}

TEST_CASE("measured distribution equals the oracle exactly on a grid") {
  for (int k = 1; k <= 5; ++k) {
    for (int m = 1; m <= 3; ++m) {
      const int n = k + m;
      Subset s(static_cast<std::size_t>(k));
      for (int i = 0; i < k; ++i) s[i] = i;
      for (int j = 0; j <= k; ++j) {
        for (int c = 0; c <= m; ++c) {
          const LearnerState g = guess_with(s, n, j, c);
          const auto measured = measured_event_distribution<Rational>(g.guess(), s, n);
          const auto oracle = transition_distribution<Rational>(k, j, m - c);
          for (Event e : kAllEvents) CHECK(measured[e] == oracle[e]);
          const auto fm = measured_event_distribution<Complex>(g.guess(), s, n);
          const auto fo = transition_distribution<double>(k, j, m - c);
          for (Event e : kAllEvents) CHECK(std::abs(fm[e] - fo[e]) < 1e-12);
        }
      }
    }
  }
}

TEST_CASE("empirical step frequencies match the oracle within 4 standard errors") {
  const int n = 7;
  const Subset s{0, 1, 2, 3};
  struct Case {
    int j;
    int c;
  };
  long total = 0;
  for (Case cs : {Case{0, 0}, Case{1, 1}, Case{2, 2}, Case{3, 1}, Case{1, 3}}) {
    const LearnerState g = guess_with(s, n, cs.j, cs.c);
    const auto oracle = transition_distribution<double>(4, cs.j, 3 - cs.c);
    for (Engine engine : {Engine::StateVector, Engine::Categorical}) {
      const long steps = 20000;
      const auto events = map_trials(steps, 1000 + cs.j * 10 + cs.c, [&](RandomStream& rng, long) {
        return step(g, s, rng, engine).first;
      });
      total += steps;
      for (Event e : kAllEvents) {
        long hits = 0;
        for (Event got : events) hits += got == e;
        const double p = oracle[e];
        const double se = std::sqrt(p * (1.0 - p) / steps);
        CHECK(std::abs(hits / static_cast<double>(steps) - p) <= 4.0 * se + 1e-12);
      }
    }
  }
  CHECK(total >= 100000);
}

TEST_CASE("step invariants along trajectories") {
  const auto params = QccParams::make(20, 17, 0.1);
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    RandomStream rng(seed);
    const Subset s = random_subset(params.n, params.k, rng);
    const auto in_s = to_mask(s, params.n);
    LearnerState state(params.n);
    for (int t = 0; t < 80; ++t) {
      const auto before = state.walk_point(in_s);
      const Subset g_before = state.guess();
      const auto [e, next] = step(state, s, rng, seed % 2 ? Engine::StateVector : Engine::Categorical);
      const auto after = next.walk_point(in_s);
      const int dj = after.first - before.first;
      const int dl = after.second - before.second;
      CHECK((dj >= -1 && dj <= 1));
      CHECK((dl == 0 || dl == -1));
      CHECK_FALSE((dj != 0 && dl != 0));
      if (e == Event::RogueAdded || e == Event::CouponCollected) {
        const Subset added = set_difference(next.guess(), g_before);
        REQUIRE(added.size() == 1);
        CHECK_FALSE(contains(g_before, added[0]));
      }
      next.check_partition();
      state = next;
    }
  }
}

TEST_CASE("trajectory shape and success agreement") {
  const auto params = QccParams::make(30, 27, 0.1);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    RandomStream rng(seed);
    const Subset s = random_subset(params.n, params.k, rng);
    const auto rec = run_complement_branch(params, s, 150, rng, {Engine::Categorical, true});
    CHECK(rec.walk.size() == 151);
    CHECK(rec.events.size() == 150);
    CHECK(rec.walk.front() == std::pair{0, params.m()});
    CHECK(rec.success == (rec.walk.back() == std::pair{0, 0}));
    CHECK(rec.success == (rec.output_set == s));
  }
}

TEST_CASE("regime and size checks") {
  RandomStream rng(1);
  try {
    run_complement_branch(QccParams::make(10, 8, 0.1), {0, 1, 2, 3, 4, 5, 6, 7}, 5, rng);
    FAIL("expected RegimeViolation");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::RegimeViolation);
  }
  CHECK_THROWS_AS(run_complement_branch(QccParams::make(100, 98, 0.1), {0, 1}, 5, rng), Error);
}

TEST_CASE("run_trial is deterministic per seed") {
  const auto params = QccParams::make(100, 98, 0.1);
  for (std::uint64_t i = 0; i < 10; ++i) {
    RandomStream a = RandomStream::for_trial(42, i);
    RandomStream b = RandomStream::for_trial(42, i);
    const Subset sa = random_subset(params.n, params.k, a);
    const Subset sb = random_subset(params.n, params.k, b);
    const auto ra = run_trial(params, sa, a, {Engine::Categorical, true});
    const auto rb = run_trial(params, sb, b, {Engine::Categorical, true});
    CHECK(ra.success == rb.success);
    CHECK(ra.output_set == rb.output_set);
    CHECK(ra.events == rb.events);
    CHECK(ra.walk == rb.walk);
  }
}

TEST_CASE("engines agree in distribution") {
  const auto params = QccParams::make(20, 17, 0.2);
  const long samples = 40;
  const long trials = 3000;
  Estimate est[2];
  int idx = 0;
  for (Engine engine : {Engine::Categorical, Engine::StateVector}) {
    est[idx++] = estimate_probability(trials, 8, [&](RandomStream& rng, long) {
      const Subset s = random_subset(params.n, params.k, rng);
      return run_complement_branch(params, s, samples, rng, {engine, false}).success;
    });
  }
  const double se = std::sqrt(est[0].std_error() * est[0].std_error() + est[1].std_error() * est[1].std_error());
  CHECK(std::abs(est[0].rate() - est[1].rate()) <= 4.0 * se);
}
