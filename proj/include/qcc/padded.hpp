#pragma once

// Padded coupon collector ensembles.
//
// A padded sample of S with pad function f is (1/sqrt k) sum_{i in S} |i>|f(i)>.
// Averaging t copies over uniform f and conjugating the pad registers by the
// Fourier transform over Z_p block-diagonalizes the ensemble: the blocks are
// indexed by the modular signature b = ms(i, x) of (index sequence, pad
// sequence) pairs, and block b has weight ||phi_{S,b}||^2 / (k p)^t where
// ||phi_{S,b}||^2 counts the pairs with that signature. Everything here is
// counting plus small dense matrices at desk scale.

#include "qcc/combinatorics.hpp"
#include "qcc/random.hpp"
#include "qcc/rational.hpp"
#include "qcc/subset.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <cmath>
#include <compare>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace qcc {

inline constexpr std::int64_t kEnumerationBudget = 10'000'000;  // k^t p^t
inline constexpr std::int64_t kDenseBudget = 64;                // (n p)^t
inline constexpr std::int64_t kPadFunctionBudget = 1 << 16;     // p^n

struct PaddedParams {
  int n = 0;
  int k = 0;
  int t = 1;
  int p = 2;
  int l = 0;
  double delta = 0.125;

  /// n >= k >= 1, t >= 1, p >= 2, l >= 0 (DomainError otherwise).
  void validate() const;
};

/// b in N_p^n, stored sparsely as (position, value) with value != 0, sorted by position.
class ModularSignature {
 public:
  ModularSignature() = default;
  ModularSignature(int n, std::vector<std::pair<int, int>> coords);

  static ModularSignature from_dense(std::span<const int> dense);

  int n() const { return n_; }
  const std::vector<std::pair<int, int>>& coords() const { return coords_; }
  int support_size() const { return static_cast<int>(coords_.size()); }
  Subset support() const;
  bool is_zero() const { return coords_.empty(); }
  std::vector<int> dense() const;
  std::string str() const;

  auto operator<=>(const ModularSignature&) const = default;

 private:
  int n_ = 0;
  std::vector<std::pair<int, int>> coords_;
};

/// b_q = sum_{r : i_r = q} x_r mod p. Throws LengthMismatch / OutOfRange.
ModularSignature modular_signature(std::span<const int> indices, std::span<const int> pads, int n, int p);

struct BlockEntry {
  std::int64_t norm_s = 0;           // ||phi_{S,b}||^2
  std::int64_t norm_restricted = 0;  // ||phi_b||^2
};

struct BlockTable {
  Subset s;
  int n = 0;
  int t = 0;
  int p = 0;
  std::map<ModularSignature, BlockEntry> entries;  // canonical signature order

  std::int64_t total_norm() const;
  int k() const { return static_cast<int>(s.size()); }
};

/// Enumerates every (i, x) in S^t x N_p^t. Throws BudgetExceeded above kEnumerationBudget.
BlockTable block_norms(const Subset& s, int t, int p, int n);

/// p^{t - s} n_{t,s}: right side of the restricted-count identity for |supp(b)| = s.
BigInt restricted_count_formula(int support_size, int t, int p);

/// sum over supp(b) <= T <= S of p^{t-|T|} n_{t,|T|}, with |S| = k.
BigInt block_count_formula(int support_size, int k, int t, int p);

struct IdentityViolation {
  Subset s;
  ModularSignature b;
  std::string check;
  std::string expected;
  std::string actual;
};

struct IdentityReport {
  long checks = 0;
  std::vector<IdentityViolation> violations;

  bool ok() const { return violations.empty(); }
  void merge(IdentityReport other);
};

/// Checks both counting identities, the norm total, support containment and
/// block completeness for one table.
IdentityReport verify_counting_identities(const BlockTable& table);

struct BlockFidelity {
  Rational ratio;              // ||phi_b||^2 / ||phi_{S,b}||^2
  double trace_distance = 0;   // 2 sqrt(1 - ratio)
  bool degenerate = false;     // n_{t,|supp b|} = 0
  double ratio_floor = 0;      // 1 / (1 + k^t / p)
  double distance_bound = 0;   // 2 sqrt(k^t / p)
  /// ratio >= ratio_floor and distance <= distance_bound; vacuously true when degenerate.
  bool within_bound = true;
};

/// Throws ZeroBlock when norm_s == 0.
BlockFidelity fidelity_and_distance(const BlockEntry& entry, int support_size, int k, int t, int p);
BlockFidelity fidelity_and_distance(const BlockTable& table, const ModularSignature& b);

/// Closed-form fidelity for a block with |supp(b)| = s, via the counting identities.
BlockFidelity block_fidelity_formula(int support_size, int k, int t, int p);

/// Unnormalized block vectors over the S^t x N_p^t index space (dimension k^t p^t).
std::pair<Eigen::VectorXd, Eigen::VectorXd> block_vectors(const BlockTable& table, const ModularSignature& b);

/// || |a><a|/<a|a> - |c><c|/<c|c> ||_1 from the eigenvalues of the difference
/// restricted to span{a, c}.
double pure_state_trace_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& c);

using DenseMatrix = Eigen::MatrixXcd;

/// Sum of absolute eigenvalues of a Hermitian matrix.
double trace_norm(const DenseMatrix& hermitian);

struct DensityCheck {
  double hermitian_error = 0;
  double trace = 0;
  double min_eigenvalue = 0;

  bool ok() const { return hermitian_error <= 1e-12 && std::abs(trace - 1.0) <= 1e-10 && min_eigenvalue >= -1e-9; }
};

DensityCheck check_density(const DenseMatrix& m);

/// Fourier transform over Z_p: F[j][i] = omega^{ij} / sqrt(p).
DenseMatrix fourier_matrix(int p);
DenseMatrix kronecker(const DenseMatrix& a, const DenseMatrix& b);

struct Ensembles {
  DenseMatrix sigma;       // pad-averaged t-fold samples, indices then pads
  DenseMatrix rho;         // (I x F^t) sigma (I x F^t)^*
  DenseMatrix rho_blocks;  // (1/(k p)^t) sum_b |phi_{S,b}><phi_{S,b}|
  DenseMatrix rho_prime;   // restricted blocks, zero-restricted blocks dropped
  double dropped_weight = 0;
  double reconstruction_error = 0;  // max entry |rho - rho_blocks|
  double half_trace_distance = 0;   // (1/2) ||rho - rho_prime||_1
};

/// Dense construction; BudgetExceeded unless (n p)^t <= kDenseBudget and p^n <= kPadFunctionBudget.
Ensembles build_ensembles(const Subset& s, int t, int p, int n);

enum class DistributionMode { Exact, Enumerated, Sampled };

struct SupportDistribution {
  std::vector<double> support;  // P[|supp(ms(I, X))| = s], s = 0..k
  std::vector<double> range;    // P[|range(I)| = s], s = 0..k
  /// Largest P[|supp| >= b] - P[|range| >= b] over b.
  double max_tail_excess = 0;
};

/// Exact: mixes Binomial(r, 1 - 1/p) over the range-size law (each occupied
/// coordinate's pad sum is uniform on Z_p and independent of the others).
/// Enumerated: brute force over S^t x N_p^t. Sampled: `trials` draws from `rng`.
SupportDistribution support_size_distribution(int k, int t, int p, DistributionMode mode,
                                              RandomStream* rng = nullptr, long trials = 0);

/// Success of the optimal learner on restricted blocks: read b, output a
/// uniformly random size-k superset of supp(b), succeed with <= l mismatches.
double t2_optimal_success(int n, int k, int l, int t, int p, DistributionMode mode = DistributionMode::Exact,
                          RandomStream* rng = nullptr, long trials = 0);

/// k ln((k+1)/(10 l + 1)) + k ln(1 - 4 delta); DomainError unless l >= 1 and delta in (0, 1/4).
double t0_threshold(int k, int l, double delta);

/// Grid of (n, k, t, p) for exhaustive verification. Bounds are inclusive maxima.
struct PaddedGrid {
  int max_n = 4;
  int max_k = 3;
  int max_t = 3;
  std::vector<int> p_values{2, 3};
};

struct PaddedVerification {
  IdentityReport identities;
  long fidelity_checks = 0;
  long fidelity_violations = 0;
  long distance_mismatches = 0;  // ratio route vs eigenvalue route
  double max_distance_mismatch = 0;
  double degenerate_weight_max = 0;  // largest dropped-block weight seen
  double zero_pad_fraction_min = 1;  // its enumerated upper envelope, see source
  long degenerate_weight_violations = 0;
  long configurations = 0;

  bool ok() const {
    return identities.ok() && fidelity_violations == 0 && distance_mismatches == 0 &&
           degenerate_weight_violations == 0;
  }
};

/// Runs every counting and fidelity check over the grid. `mutate` (may be
/// empty) edits each table before checking; the harness uses it for fault
/// injection.
PaddedVerification verify_padded_grid(const PaddedGrid& grid,
                                      const std::function<void(BlockTable&)>& mutate = {});

/// Largest non-degenerate block trace distance over k in `ks`, t in `ts`, via the closed form.
double max_block_distance(std::span<const int> ks, std::span<const int> ts, int p);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(std::span<const double> xs, std::span<const double> ys);

}  // namespace qcc
