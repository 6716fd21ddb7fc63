#pragma once

// Analytic oracle for the complement-learning walk.
//
// Conditioned on J_t = j rogue coupons in the guess and L_t = l uncollected
// complement coupons, one iteration of the learner removes a rogue coupon,
// adds a rogue coupon, collects a complement coupon, or does nothing, with
// the closed-form probabilities below. The formulas are rational in (k, j, l),
// so they are templated on the number type and the tests evaluate them over
// qcc::Rational.

#include "qcc/errors.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <string>
#include <type_traits>

namespace qcc {

enum class Event { RogueRemoved, RogueAdded, CouponCollected, NoOp };

inline constexpr std::array<Event, 4> kAllEvents{Event::RogueRemoved, Event::RogueAdded,
                                                 Event::CouponCollected, Event::NoOp};

const char* to_string(Event e);

template <typename Real = double>
struct EventDistribution {
  Real rogue_removed{0};
  Real rogue_added{0};
  Real coupon_collected{0};
  Real no_op{0};

  const Real& operator[](Event e) const {
    switch (e) {
      case Event::RogueRemoved: return rogue_removed;
      case Event::RogueAdded: return rogue_added;
      case Event::CouponCollected: return coupon_collected;
      case Event::NoOp: break;
    }
    return no_op;
  }
  Real& operator[](Event e) {
    return const_cast<Real&>(static_cast<const EventDistribution&>(*this)[e]);
  }
  Real total() const { return rogue_removed + rogue_added + coupon_collected + no_op; }
};

/// (J_t, L_t) of the walk, with the problem sizes it lives in.
struct WalkState {
  int j = 0;
  int l = 0;
  int k = 0;
  int m = 0;

  int rogue() const { return j; }
  int uncollected() const { return l; }
  int distance() const { return j + l; }
};

/// One-step event probabilities from state (j, l) with |S| = k.
/// At (j, l) = (k, 0) every add-path numerator vanishes and removal is certain.
template <typename Real = double>
EventDistribution<Real> transition_distribution(int k, int j, int l) {
  if (k < 1 || j < 0 || j > k || l < 0) {
    throw Error(ErrorCode::InvalidState, "transition_distribution(k=" + std::to_string(k) +
                                             ", j=" + std::to_string(j) + ", l=" + std::to_string(l) + ")");
  }
  EventDistribution<Real> d;
  const Real kk(k);
  d.rogue_removed = Real(j) / kk;
  const int free_in_s = k - j;
  const int u = free_in_s + l;  // |U| restricted to S and C
  if (u == 0 || l == 0 || free_in_s == 0) {
    d.no_op = Real(1) - d.rogue_removed;
    return d;
  }
  const Real denom = kk * Real(u) * Real(u);
  d.rogue_added = Real(free_in_s) * Real(l) * Real(l) / denom;
  d.coupon_collected = Real(free_in_s) * Real(free_in_s) * Real(l) / denom;
  d.no_op = Real(1) - d.rogue_removed - d.rogue_added - d.coupon_collected;
  return d;
}

/// Per-step contraction factor 1 - (1/k)(1 - 3m/n).
template <typename Real = double>
Real contraction_factor(int n, int k) {
  const int m = n - k;
  return Real(1) - (Real(1) / Real(k)) * (Real(1) - Real(3 * m) / Real(n));
}

/// E[K_{t+1} | J_t = j, L_t = l], checked against r * contraction_factor.
template <typename Real = double>
Real expected_K_next(int k, int n, int j, int l) {
  const int m = n - k;
  if (l > m) throw Error(ErrorCode::InvalidState, "l exceeds m");
  const auto d = transition_distribution<Real>(k, j, l);
  const Real r(j + l);
  const Real value = r + d.rogue_added - d.rogue_removed - d.coupon_collected;
  const Real bound = r * contraction_factor<Real>(n, k);
  bool within;
  if constexpr (std::is_floating_point_v<Real>) {
    within = value <= bound + 1e-12;
  } else {
    within = value <= bound;
  }
  if (!within) throw Error(ErrorCode::InvariantViolation, "one-step expectation exceeds contraction bound");
  return value;
}

/// 3m ln(e m) <= n: the regime where the learner reconstructs the complement.
bool in_complement_regime(int n, int k);

/// m (1 - (1/k)(1 - 3m/n))^t. Throws RegimeViolation outside the complement regime.
double expected_K_bound(int n, int k, double t);

enum class LowerCase { SmallM, General };

const char* to_string(LowerCase c);

struct BoundsReport {
  long upper_samples = 0;
  LowerCase lower_case = LowerCase::General;
  double lower_value = 0.0;
  double c0 = 0.0;
  /// False for the General case: its -O(k) term has no published constant, so
  /// the value is a reference curve, not a certified bound.
  bool certified = false;
  std::function<double(double)> expected_K_curve;
};

/// c0 = (1/2) ln((1 - delta) / (32 delta)); requires delta in (0, 1/40].
double lower_bound_c0(double delta);

/// Lower-bound reference values for (n, k, delta), plus the matching upper budget.
BoundsReport lower_bound_reference(int n, int k, double delta);

}  // namespace qcc
