#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qcc/errors.hpp"
#include "qcc/algorithm.hpp"
#include "qcc/markov.hpp"
#include "qcc/rational.hpp"
#include "qcc/trials.hpp"

#include <cmath>
#include <map>

using namespace qcc;

namespace {

Rational R(long a, long b = 1) { return Rational(a, b); }

// Exact law of (J_t, L_t) started from (0, m), pushed forward through the
// closed-form transitions.
std::map<std::pair<int, int>, double> propagate(int k, int m, int steps) {
  std::map<std::pair<int, int>, double> law{{{0, m}, 1.0}};
  for (int s = 0; s < steps; ++s) {
    std::map<std::pair<int, int>, double> next;
    for (const auto& [state, w] : law) {
      const auto [j, l] = state;
      const auto d = transition_distribution<double>(k, j, l);
      if (d.rogue_removed > 0) next[{j - 1, l}] += w * d.rogue_removed;
      if (d.rogue_added > 0) next[{j + 1, l}] += w * d.rogue_added;
      if (d.coupon_collected > 0) next[{j, l - 1}] += w * d.coupon_collected;
      if (d.no_op > 0) next[{j, l}] += w * d.no_op;
    }
    law = std::move(next);
  }
  return law;
}

}  // namespace

TEST_CASE("transition_distribution examples") {
  const auto a = transition_distribution<Rational>(2, 0, 1);
  CHECK(a.rogue_removed == 0);
  CHECK(a.rogue_added == R(1, 9));
  CHECK(a.coupon_collected == R(2, 9));
  CHECK(a.no_op == R(6, 9));

  const auto b = transition_distribution<Rational>(5, 0, 0);
  CHECK(b.no_op == 1);
  CHECK(b.total() == 1);

  const auto c = transition_distribution<Rational>(3, 1, 0);
  CHECK(c.rogue_removed == R(1, 3));
  CHECK(c.rogue_added == 0);
  CHECK(c.coupon_collected == 0);
  CHECK(c.no_op == R(2, 3));

  const auto full = transition_distribution<Rational>(4, 4, 0);
  CHECK(full.rogue_removed == 1);
  CHECK(full.total() == 1);

  const auto d = transition_distribution<Rational>(2, 1, 1);
  CHECK(d.rogue_removed == R(1, 2));
  CHECK(d.rogue_added == R(1, 8));
  CHECK(d.coupon_collected == R(1, 8));
  CHECK(d.no_op == R(1, 4));
}

TEST_CASE("transition_distribution rejects invalid states") {
  for (auto [k, j, l] : {std::tuple{3, 4, 0}, std::tuple{3, -1, 0}, std::tuple{3, 0, -1}, std::tuple{0, 0, 0}}) {
    try {
      transition_distribution<double>(k, j, l);
      FAIL("expected InvalidState");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::InvalidState);
    }
  }
}

TEST_CASE("distribution sums to one and expectation matches expected_K_next, exactly") {
  for (int k = 1; k <= 12; ++k) {
    for (int j = 0; j <= k; ++j) {
      for (int l = 0; l <= 6; ++l) {
        const auto d = transition_distribution<Rational>(k, j, l);
        CHECK(d.total() == 1);
        for (Event e : kAllEvents) CHECK(d[e] >= 0);
        const auto df = transition_distribution<double>(k, j, l);
        CHECK(std::abs(df.total() - 1.0) < 1e-14);

        // Any n with m >= l works for the expectation; the contraction check
        // inside only holds in the complement regime, so pick n large.
        const int n = k + 200;
        const Rational r(j + l);
        const Rational by_events =
            d.rogue_removed * (r - 1) + d.rogue_added * (r + 1) + d.coupon_collected * (r - 1) + d.no_op * r;
        CHECK(expected_K_next<Rational>(k, n, j, l) == by_events);
      }
    }
  }
}

TEST_CASE("expected_K_next examples") {
  CHECK(expected_K_next<Rational>(5, 8, 0, 0) == 0);
  CHECK(expected_K_next<Rational>(2, 3, 0, 1) == R(8, 9));
  CHECK(contraction_factor<Rational>(3, 2) == 1);
  for (int k = 2; k <= 9; ++k) {
    for (int j = 0; j <= k; ++j) {
      CHECK(expected_K_next<Rational>(k, k + 1, j, 0) == Rational(j) * (1 - R(1, k)));
    }
  }
}

TEST_CASE("expected_K_next matches the formula written out") {
  for (int k = 2; k <= 10; ++k) {
    for (int j = 0; j <= k; ++j) {
      for (int l = 1; l <= 5; ++l) {
        const Rational kk(k);
        const Rational u(k - j + l);
        const Rational written = Rational(j + l) - Rational(j) / kk -
                                 Rational(k - j) * Rational(k - j - l) * Rational(l) / (kk * u * u);
        CHECK(expected_K_next<Rational>(k, k + 500, j, l) == written);
      }
    }
  }
}

TEST_CASE("regime and expected_K_bound") {
  CHECK_FALSE(in_complement_regime(10, 8));
  CHECK(in_complement_regime(100, 98));
  CHECK(in_complement_regime(100, 99));
  try {
    expected_K_bound(10, 8, 1.0);
    FAIL("expected RegimeViolation");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::RegimeViolation);
  }
  CHECK(expected_K_bound(100, 98, 0.0) == doctest::Approx(2.0).epsilon(1e-15));
  const double ell = 98 * std::log(2.0) + 98 * std::log(std::exp(1.0) / 0.1);
  CHECK(expected_K_bound(100, 98, ell) <= 0.1);

  double previous = 1.0;
  for (int n = 10; n <= 200; ++n) {
    const double v = expected_K_bound(n, n - 1, n - 1.0);
    CHECK(v <= std::exp(-(1.0 - 3.0 / n)) + 1e-12);
    CHECK(v <= previous + 1e-15);
    previous = v;
  }
}

TEST_CASE("iterated expectation stays under the envelope") {
  for (auto [n, k] : {std::pair{20, 17}, std::pair{30, 27}, std::pair{40, 36}, std::pair{12, 10}}) {
    REQUIRE(in_complement_regime(n, k));
    const int m = n - k;
    for (int t = 0; t <= 60; t += 4) {
      double mean = 0.0;
      for (const auto& [state, w] : propagate(k, m, t)) mean += w * (state.first + state.second);
      CHECK(mean <= expected_K_bound(n, k, t) + 1e-12);
    }
  }
}

TEST_CASE("Monte Carlo mean of K_t under the envelope") {
  const auto params = QccParams::make(40, 36, 0.1);
  const int horizon = 120;
  const long trials = 4000;
  const auto walks = map_trials(trials, 77, [&](RandomStream& rng, long) {
    const Subset s = random_subset(params.n, params.k, rng);
    return run_complement_branch(params, s, horizon, rng, {Engine::Categorical, true}).walk;
  });
  for (int t = 0; t <= horizon; ++t) {
    double sum = 0.0;
    double sum_sq = 0.0;
    for (const auto& w : walks) {
      const double kt = w[t].first + w[t].second;
      sum += kt;
      sum_sq += kt * kt;
    }
    const double mean = sum / trials;
    const double se = std::sqrt(std::max(0.0, sum_sq / trials - mean * mean) / (trials - 1.0));
    CHECK(mean <= expected_K_bound(params.n, params.k, t) + 3.0 * se + 1e-12);
  }
}

TEST_CASE("lower_bound_reference") {
  CHECK(lower_bound_c0(1.0 / 40.0) == doctest::Approx(0.5 * std::log(1.21875)));
  CHECK(lower_bound_c0(1.0 / 40.0) == doctest::Approx(0.09891).epsilon(1e-4));
  try {
    lower_bound_reference(100, 50, 0.1);
    FAIL("expected DeltaOutOfRange");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DeltaOutOfRange);
  }

  const int n = 100000;
  const auto small = lower_bound_reference(n, n - 10, 1.0 / 40.0);
  CHECK(small.lower_case == LowerCase::SmallM);
  CHECK(small.certified);
  CHECK(small.lower_value == doctest::Approx((n - 10) * std::log(10.0) + small.c0 * n));
  CHECK(small.upper_samples == sample_budget(QccParams::make(n, n - 10, 1.0 / 40.0)).samples);

  const auto general = lower_bound_reference(100, 50, 1.0 / 40.0);
  CHECK(general.lower_case == LowerCase::General);
  CHECK_FALSE(general.certified);
  CHECK(general.lower_value == doctest::Approx(50 * std::log(50.0) - 50 * std::log(std::log(50.0))));
  CHECK(general.upper_samples >= 1);
  CHECK(general.expected_K_curve(0.0) == doctest::Approx(50.0));

  const auto comp = lower_bound_reference(1000, 995, 1.0 / 40.0);
  CHECK(comp.expected_K_curve(10.0) == doctest::Approx(expected_K_bound(1000, 995, 10.0)));
}
