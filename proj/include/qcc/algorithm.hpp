#pragma once

// The quantum coupon collector learner.
//
// Two regimes, chosen from (n, k): when 3m ln(e m) > n the learner measures
// every sample in the computational basis and keeps what it saw; otherwise it
// maintains a guess G for the complement of S and refines it one sample at a
// time with the (Pi_G, I - Pi_G) and (|psi_U><psi_U|, I - |psi_U><psi_U|)
// measurements.
//
// The complement loop has two interchangeable engines: a state-vector engine
// that literally performs the measurements, and a categorical engine that
// samples the event from its closed-form distribution and then the element
// uniformly from the matching pool. They agree in distribution, not draw for
// draw.

#include "qcc/markov.hpp"
#include "qcc/random.hpp"
#include "qcc/statevec.hpp"
#include "qcc/subset.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace qcc {

struct QccParams {
  int n = 0;
  int k = 0;
  double delta = 0.0;

  int m() const { return n - k; }

  /// Validates n >= 3, 1 < k < n, 0 < delta < 1 (DomainError otherwise).
  static QccParams make(int n, int k, double delta);
};

enum class Branch { Classical, Complement };

const char* to_string(Branch b);

struct SampleBudget {
  Branch branch = Branch::Classical;
  long samples = 0;
};

/// Ceil(k ln k + k ln(1/delta)) when 3m ln(e m) > n, else ceil(k ln m + k ln(e/delta)).
SampleBudget sample_budget(const QccParams& params);

/// Guess G for the complement and its complement U, kept as two masks.
class LearnerState {
 public:
  explicit LearnerState(int n);
  LearnerState(int n, const Subset& guess);

  int n() const { return static_cast<int>(guess_.size()); }
  bool in_guess(int x) const { return guess_[x] != 0; }
  Subset guess() const;
  Subset open() const;

  void add(int x);
  void remove(int x);

  /// Throws InvariantViolation unless G and U partition [n].
  void check_partition() const;

  /// (J, L) = (|G n S|, |complement(S) \ G|).
  std::pair<int, int> walk_point(const std::vector<char>& in_s) const;

  bool operator==(const LearnerState&) const = default;

 private:
  std::vector<char> guess_;
  std::vector<char> open_;
};

enum class Engine { Categorical, StateVector };

const char* to_string(Engine e);

struct TrialOptions {
  Engine engine = Engine::Categorical;
  bool record_trajectory = false;
};

struct TrialRecord {
  bool success = false;
  Subset output_set;
  long iterations = 0;
  /// Final J + L for the complement branch; uncollected count for the classical one.
  int final_distance = 0;
  std::vector<Event> events;
  std::vector<std::pair<int, int>> walk;
};

/// Measures `samples` copies of psi_S in the computational basis.
TrialRecord run_classical_branch(const Subset& s, long samples, RandomStream& rng);

/// Runs the complement loop for `samples` iterations from an arbitrary start.
TrialRecord run_complement_branch(const Subset& s, LearnerState start, long samples,
                                  RandomStream& rng, const TrialOptions& options = {});

/// Runs the complement loop from G = {} after checking the regime.
TrialRecord run_complement_branch(const QccParams& params, const Subset& s, long samples,
                                  RandomStream& rng, const TrialOptions& options = {});

/// Full learner: picks the branch from `params`; `samples` overrides the budget when positive.
TrialRecord run_trial(const QccParams& params, const Subset& s, RandomStream& rng,
                      const TrialOptions& options = {}, long samples = 0);

/// One loop iteration.
std::pair<Event, LearnerState> step(const LearnerState& state, const Subset& s, RandomStream& rng,
                                    Engine engine = Engine::StateVector);

/// Exact one-step event distribution obtained by running the measurement
/// sequence through the state-vector engine over `Scalar`.
template <typename Scalar>
EventDistribution<RealOf<Scalar>> measured_event_distribution(const Subset& guess, const Subset& s,
                                                              int n) {
  using Real = RealOf<Scalar>;
  const auto is_zero = [](const Real& w) {
    if constexpr (is_exact_v<Scalar>) {
      return w == Real(0);
    } else {
      return w < kDegenerateBranch;
    }
  };

  EventDistribution<Real> d;
  const auto psi_s = uniform_state<Scalar>(s, n);
  const auto m0 = Projector<Scalar>::onto_subset(guess, n);
  d.rogue_removed = outcome_zero_probability(psi_s, m0);
  const Real p1 = Real(1) - d.rogue_removed;
  if (is_zero(p1)) return d;

  const StateVector<Scalar> xi1(Vector<Scalar>(psi_s.amps() - apply(m0, psi_s.amps())), false);
  const Subset u = complement(guess, n);
  if (u.empty()) {
    d.no_op = p1;
    return d;
  }
  const auto psi_u = uniform_state<Scalar>(u, n);
  const Real q0 = outcome_zero_probability(xi1, Projector<Scalar>::onto_state(psi_u));
  d.no_op = p1 * q0;
  const Real q1 = Real(1) - q0;
  if (is_zero(q1)) return d;

  const auto phi1 = residual_after_reflection(xi1, psi_u);
  const auto probs = basis_probabilities(phi1);
  const auto in_s = to_mask(s, n);
  for (int i = 0; i < n; ++i) {
    const Real w = p1 * q1 * probs[i];
    if (in_s[i]) {
      d.rogue_added += w;
    } else {
      d.coupon_collected += w;
    }
  }
  return d;
}

}  // namespace qcc
