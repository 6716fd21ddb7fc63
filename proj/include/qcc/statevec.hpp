#pragma once

// Minimal exact state-vector engine over C^n.
//
// Every routine is templated on the amplitude scalar. With std::complex<double>
// states are kept normalized and measurement residuals are renormalized. With
// an exact scalar (qcc::Rational) square roots are unavailable, so states are
// carried as unnormalized rays and every probability is a ratio of squared
// norms; this is what the rational oracle tests run on.

#include "qcc/errors.hpp"
#include "qcc/random.hpp"
#include "qcc/rational.hpp"
#include "qcc/subset.hpp"

#include <Eigen/Core>

#include <cmath>
#include <complex>
#include <string>
#include <type_traits>
#include <variant>

namespace qcc {

using Complex = std::complex<double>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using RealOf = typename Eigen::NumTraits<Scalar>::Real;

template <typename Scalar>
inline constexpr bool is_exact_v = std::is_same_v<Scalar, Rational>;

inline constexpr double kNormTolerance = 1e-9;
inline constexpr double kDegenerateBranch = 1e-15;

template <typename Scalar = Complex>
class StateVector {
 public:
  StateVector() = default;

  /// Wraps amplitudes; `normalized` asserts that the caller already scaled them.
  explicit StateVector(Vector<Scalar> amps, bool normalized = true)
      : amps_(std::move(amps)), normalized_(normalized) {
    if (amps_.size() < 1) throw Error(ErrorCode::DimensionMismatch, "state dimension must be >= 1");
  }

  Eigen::Index dim() const { return amps_.size(); }
  const Vector<Scalar>& amps() const { return amps_; }
  const Scalar& operator[](Eigen::Index i) const { return amps_[i]; }
  bool normalized() const { return normalized_; }

  RealOf<Scalar> squared_norm() const { return amps_.squaredNorm(); }

 private:
  Vector<Scalar> amps_;
  bool normalized_ = true;
};

/// Orthogonal projection onto span{|i> : i in X}.
struct SubsetProjector {
  Subset elements;
};

/// |phi><phi| / <phi|phi>.
template <typename Scalar = Complex>
struct Rank1Projector {
  StateVector<Scalar> phi;
};

template <typename Scalar = Complex>
struct Projector {
  Eigen::Index dim;
  std::variant<SubsetProjector, Rank1Projector<Scalar>> kind;

  static Projector onto_subset(Subset x, int n) {
    return {n, SubsetProjector{make_subset(std::move(x), n)}};
  }
  static Projector onto_state(StateVector<Scalar> phi) {
    const auto d = phi.dim();
    return {d, Rank1Projector<Scalar>{std::move(phi)}};
  }
};

template <typename Scalar = Complex>
struct Measurement {
  int outcome;
  StateVector<Scalar> residual;
};

namespace detail {

inline void require_same_dim(Eigen::Index a, Eigen::Index b) {
  if (a != b) {
    throw Error(ErrorCode::DimensionMismatch,
                "dimensions " + std::to_string(a) + " and " + std::to_string(b));
  }
}

template <typename Scalar>
void require_normalized(const StateVector<Scalar>& state) {
  if constexpr (!is_exact_v<Scalar>) {
    if (state.normalized()) {
      const double norm2 = static_cast<double>(state.squared_norm());
      if (std::abs(norm2 - 1.0) > kNormTolerance) {
        throw Error(ErrorCode::InvariantViolation,
                    "state norm^2 " + std::to_string(norm2) + " drifted outside tolerance");
      }
    }
  }
}

template <typename Scalar>
double to_probability(const RealOf<Scalar>& x) {
  if constexpr (is_exact_v<Scalar>) {
    return to_double(x);
  } else {
    return static_cast<double>(x);
  }
}

// Renormalizes a residual for inexact scalars; exact residuals stay rays.
template <typename Scalar>
StateVector<Scalar> finish_residual(Vector<Scalar> v) {
  if constexpr (is_exact_v<Scalar>) {
    return StateVector<Scalar>(std::move(v), false);
  } else {
    const auto norm = v.norm();
    return StateVector<Scalar>(v / norm, true);
  }
}

}  // namespace detail

/// Uniform superposition over X inside C^n. Exact scalars get the indicator ray.
template <typename Scalar = Complex>
StateVector<Scalar> uniform_state(const Subset& x, int n) {
  if (x.empty()) throw Error(ErrorCode::EmptySubset, "uniform_state over empty set");
  const Subset checked = make_subset(x, n);
  Vector<Scalar> amps = Vector<Scalar>::Zero(n);
  if constexpr (is_exact_v<Scalar>) {
    for (int i : checked) amps[i] = Scalar(1);
    return StateVector<Scalar>(std::move(amps), false);
  } else {
    const Scalar amp = Scalar(1.0 / std::sqrt(static_cast<double>(checked.size())));
    for (int i : checked) amps[i] = amp;
    return StateVector<Scalar>(std::move(amps), true);
  }
}

template <typename Scalar = Complex>
StateVector<Scalar> basis_state(int index, int n) {
  if (index < 0 || index >= n) throw Error(ErrorCode::OutOfRange, "basis index");
  Vector<Scalar> amps = Vector<Scalar>::Zero(n);
  amps[index] = Scalar(1);
  return StateVector<Scalar>(std::move(amps), true);
}

/// P applied to v, no normalization.
template <typename Scalar>
Vector<Scalar> apply(const Projector<Scalar>& proj, const Vector<Scalar>& v) {
  detail::require_same_dim(proj.dim, v.size());
  if (const auto* sub = std::get_if<SubsetProjector>(&proj.kind)) {
    Vector<Scalar> out = Vector<Scalar>::Zero(v.size());
    for (int i : sub->elements) out[i] = v[i];
    return out;
  }
  const auto& phi = std::get<Rank1Projector<Scalar>>(proj.kind).phi.amps();
  detail::require_same_dim(phi.size(), v.size());
  const Scalar coeff = phi.dot(v) / Scalar(phi.squaredNorm());
  return phi * coeff;
}

/// P[outcome 0] = ||P v||^2 / ||v||^2, exact for exact scalars.
template <typename Scalar>
RealOf<Scalar> outcome_zero_probability(const StateVector<Scalar>& state, const Projector<Scalar>& proj) {
  const Vector<Scalar> projected = apply(proj, state.amps());
  return projected.squaredNorm() / state.squared_norm();
}

/// Two-outcome projective measurement (P, I - P). Consumes one draw.
template <typename Scalar>
Measurement<Scalar> measure(const StateVector<Scalar>& state, const Projector<Scalar>& proj,
                            RandomStream& rng) {
  detail::require_same_dim(state.dim(), proj.dim);
  detail::require_normalized(state);
  const Vector<Scalar> projected = apply(proj, state.amps());
  const RealOf<Scalar> total = state.squared_norm();
  const double p0 = detail::to_probability<Scalar>(projected.squaredNorm() / total);
  const int outcome = rng.uniform01() < p0 ? 0 : 1;
  Vector<Scalar> branch = outcome == 0 ? projected : Vector<Scalar>(state.amps() - projected);
  const double weight = outcome == 0 ? p0 : 1.0 - p0;
  if (weight < kDegenerateBranch) {
    throw Error(ErrorCode::DegenerateBranch, "sampled a measurement branch of zero weight");
  }
  return {outcome, detail::finish_residual<Scalar>(std::move(branch))};
}

/// Squared amplitudes divided by the squared norm.
template <typename Scalar>
Vector<RealOf<Scalar>> basis_probabilities(const StateVector<Scalar>& state) {
  const RealOf<Scalar> total = state.squared_norm();
  Vector<RealOf<Scalar>> probs(state.dim());
  for (Eigen::Index i = 0; i < state.dim(); ++i) {
    probs[i] = Eigen::numext::abs2(state[i]) / total;
  }
  return probs;
}

/// Computational-basis measurement. Consumes one draw.
template <typename Scalar>
int measure_computational(const StateVector<Scalar>& state, RandomStream& rng) {
  detail::require_normalized(state);
  const auto probs = basis_probabilities(state);
  const double u = rng.uniform01();
  double cumulative = 0.0;
  int last_nonzero = -1;
  for (Eigen::Index i = 0; i < probs.size(); ++i) {
    const double p = detail::to_probability<Scalar>(probs[i]);
    if (p <= 0.0) continue;
    last_nonzero = static_cast<int>(i);
    cumulative += p;
    if (u < cumulative) return last_nonzero;
  }
  // u landed in the rounding slack above the final cumulative sum.
  if (last_nonzero < 0) throw Error(ErrorCode::DegenerateBranch, "zero state");
  return last_nonzero;
}

/// (I - |phi><phi|/<phi|phi>) state, unnormalized.
template <typename Scalar>
StateVector<Scalar> residual_after_reflection(const StateVector<Scalar>& state,
                                              const StateVector<Scalar>& phi) {
  detail::require_same_dim(state.dim(), phi.dim());
  const Scalar coeff = phi.amps().dot(state.amps()) / Scalar(phi.squared_norm());
  return StateVector<Scalar>(state.amps() - phi.amps() * coeff, false);
}

}  // namespace qcc
