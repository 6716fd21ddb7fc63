#pragma once

// Classical coupon collection and the counting facts the lower bounds rest on.

#include "qcc/random.hpp"
#include "qcc/rational.hpp"
#include "qcc/subset.hpp"

#include <vector>

namespace qcc {

struct CollectionOutcome {
  int distinct_count = 0;
  long samples_used = 0;
  /// Indices into the hidden set, 0..k-1.
  Subset observed;
};

/// t uniform draws from a size-k set.
CollectionOutcome collect(int k, long t, RandomStream& rng);

/// k (1 - 1/k)^t, the expected number of coupons still missing after t draws.
double expected_uncollected(int k, double t);

/// exp(-2 lambda^2 / t): tail bound for a hypergeometric count around its mean.
double hypergeom_hoeffding(double t, double lambda);

/// P[|T n T'| >= l - m] for |T| = |T'| = l drawn from a ground set of size l + 5m.
Rational guess_success_prob_exact(int l, int m);

/// Probability that a uniformly random size-k superset of an observed size-s
/// subset of S (|S| = k, ground set n) has at most l elements outside S.
Rational fill_success_prob(int n, int k, int l, int s);

/// Exact P[|range(I)| = r] for I uniform on S^t, |S| = k; index r = 0..k.
std::vector<Rational> range_size_distribution(int k, int t);

struct T3Config {
  int n = 0;
  int k = 0;
  int l = 0;
  long t = 0;

  /// n >= k >= 1, l >= 0, t >= 0 (DomainError otherwise).
  void validate() const;
  /// n = k + 5 l.
  static T3Config standard(int k, int l, long t);
};

/// Draws S uniformly, observes t samples, fills the rest uniformly from the
/// unseen ground set; true iff the guess has at most l mismatches.
bool t3_trial(const T3Config& cfg, RandomStream& rng);

/// Exact success of the uniform-fill strategy: sum_r P[|range| = r] * fill_success_prob(n, k, l, r).
Rational t3_success_exact(const T3Config& cfg);

/// k ln((k+1)/(l+1)) + k ln(1 - delta), delta in [0, 1).
double collect_lower_bound(int k, int l, double delta);

/// k ln((k+1)/(10 l + 1)) + k ln(1 - 2 delta), delta in [0, 1/2), l >= 1.
double learn_lower_bound(int k, int l, double delta);

struct ClassicalBounds {
  double collect_bound = 0.0;
  double learn_bound = 0.0;
};

/// Both bounds; DomainError when delta >= 1/2 (the learn bound is undefined there).
ClassicalBounds classical_lower_bounds(int k, int l, double delta);

}  // namespace qcc
