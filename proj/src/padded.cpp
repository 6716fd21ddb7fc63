#include "qcc/padded.hpp"

#include "qcc/classical.hpp"
#include "qcc/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <numbers>
#include <numeric>
#include <sstream>

namespace qcc {

void PaddedParams::validate() const {
  if (!(n >= k && k >= 1 && t >= 1 && p >= 2 && l >= 0)) {
    throw Error(ErrorCode::DomainError, "padded params need n >= k >= 1, t >= 1, p >= 2, l >= 0");
  }
}

ModularSignature::ModularSignature(int n, std::vector<std::pair<int, int>> coords)
    : n_(n), coords_(std::move(coords)) {
  std::sort(coords_.begin(), coords_.end());
  std::erase_if(coords_, [](const auto& c) { return c.second == 0; });
}

ModularSignature ModularSignature::from_dense(std::span<const int> dense) {
  std::vector<std::pair<int, int>> coords;
  for (std::size_t q = 0; q < dense.size(); ++q) {
    if (dense[q] != 0) coords.emplace_back(static_cast<int>(q), dense[q]);
  }
  return ModularSignature(static_cast<int>(dense.size()), std::move(coords));
}

Subset ModularSignature::support() const {
  Subset out;
  out.reserve(coords_.size());
  for (const auto& [q, v] : coords_) out.push_back(q);
  return out;
}

std::vector<int> ModularSignature::dense() const {
  std::vector<int> out(static_cast<std::size_t>(n_), 0);
  for (const auto& [q, v] : coords_) out[q] = v;
  return out;
}

std::string ModularSignature::str() const {
  std::ostringstream os;
  os << '(';
  const auto d = dense();
  for (std::size_t q = 0; q < d.size(); ++q) os << (q ? "," : "") << d[q];
  os << ')';
  return os.str();
}

ModularSignature modular_signature(std::span<const int> indices, std::span<const int> pads, int n, int p) {
  if (indices.size() != pads.size()) {
    throw Error(ErrorCode::LengthMismatch, "index and pad sequences differ in length");
  }
  std::vector<int> b(static_cast<std::size_t>(n), 0);
  for (std::size_t r = 0; r < indices.size(); ++r) {
    if (indices[r] < 0 || indices[r] >= n) throw Error(ErrorCode::OutOfRange, "index outside [0, n)");
    if (pads[r] < 0 || pads[r] >= p) throw Error(ErrorCode::OutOfRange, "pad outside N_p");
    b[indices[r]] = (b[indices[r]] + pads[r]) % p;
  }
  return ModularSignature::from_dense(b);
}

namespace {

std::int64_t checked_power(std::int64_t base, int exponent, std::int64_t limit) {
  std::int64_t out = 1;
  for (int i = 0; i < exponent; ++i) {
    out *= base;
    if (out > limit) return limit + 1;
  }
  return out;
}

// Odometer over {0..radix-1}^len; returns false after the last sequence.
bool advance(std::vector<int>& digits, int radix) {
  for (std::size_t r = digits.size(); r-- > 0;) {
    if (++digits[r] < radix) return true;
    digits[r] = 0;
  }
  return false;
}

// Visits every (i, x) in S^t x N_p^t with its flat position in that space.
template <typename Fn>
void for_each_pair(const Subset& s, int t, int p, Fn&& fn) {
  const int k = static_cast<int>(s.size());
  std::vector<int> pos(static_cast<std::size_t>(t), 0);
  std::vector<int> indices(static_cast<std::size_t>(t));
  std::vector<int> pads(static_cast<std::size_t>(t), 0);
  std::int64_t flat = 0;
  do {
    for (int r = 0; r < t; ++r) indices[r] = s[pos[r]];
    std::fill(pads.begin(), pads.end(), 0);
    do {
      fn(std::span<const int>(indices), std::span<const int>(pads), flat++);
    } while (advance(pads, p));
  } while (advance(pos, k));
}

Subset range_of(std::span<const int> indices) {
  Subset r(indices.begin(), indices.end());
  std::sort(r.begin(), r.end());
  r.erase(std::unique(r.begin(), r.end()), r.end());
  return r;
}

}  // namespace

std::int64_t BlockTable::total_norm() const {
  std::int64_t total = 0;
  for (const auto& [b, e] : entries) total += e.norm_s;
  return total;
}

BlockTable block_norms(const Subset& s, int t, int p, int n) {
  const Subset checked = make_subset(s, n);
  if (checked.empty()) throw Error(ErrorCode::EmptySubset, "block_norms over empty S");
  PaddedParams{n, static_cast<int>(checked.size()), t, p, 0}.validate();
  const std::int64_t pairs = checked_power(static_cast<std::int64_t>(checked.size()) * p, t, kEnumerationBudget);
  if (pairs > kEnumerationBudget) {
    throw Error(ErrorCode::BudgetExceeded, "k^t p^t exceeds the enumeration budget");
  }
  BlockTable table{checked, n, t, p, {}};
  for_each_pair(checked, t, p, [&](std::span<const int> i, std::span<const int> x, std::int64_t) {
    const auto b = modular_signature(i, x, n, p);
    auto& entry = table.entries[b];
    ++entry.norm_s;
    if (range_of(i) == b.support()) ++entry.norm_restricted;
  });
  return table;
}

BigInt restricted_count_formula(int support_size, int t, int p) {
  if (support_size > t) return 0;
  return ipow(p, t - support_size) * surjection_count(support_size, t);
}

BigInt block_count_formula(int support_size, int k, int t, int p) {
  BigInt total = 0;
  for (int u = support_size; u <= std::min(k, t); ++u) {
    total += binomial(k - support_size, u - support_size) * ipow(p, t - u) * surjection_count(u, t);
  }
  return total;
}

void IdentityReport::merge(IdentityReport other) {
  checks += other.checks;
  violations.insert(violations.end(), std::make_move_iterator(other.violations.begin()),
                    std::make_move_iterator(other.violations.end()));
}

IdentityReport verify_counting_identities(const BlockTable& table) {
  IdentityReport report;
  const int k = table.k();
  const auto in_s = to_mask(table.s, table.n);
  const auto violation = [&](const ModularSignature& b, std::string check, const auto& expected,
                             const auto& actual) {
    std::ostringstream e;
    std::ostringstream a;
    e << expected;
    a << actual;
    report.violations.push_back({table.s, b, std::move(check), e.str(), a.str()});
  };

  ++report.checks;
  const BigInt expected_total = ipow(k, table.t) * ipow(table.p, table.t);
  if (BigInt(table.total_norm()) != expected_total) {
    violation(ModularSignature(table.n, {}), "total-norm", expected_total, table.total_norm());
  }

  ++report.checks;
  BigInt expected_blocks = 0;
  for (int s = 0; s <= std::min(k, table.t); ++s) expected_blocks += binomial(k, s) * ipow(table.p - 1, s);
  if (BigInt(table.entries.size()) != expected_blocks) {
    violation(ModularSignature(table.n, {}), "block-count", expected_blocks, table.entries.size());
  }

  for (const auto& [b, entry] : table.entries) {
    const int s = b.support_size();
    report.checks += 4;
    const auto supp = b.support();
    if (!std::all_of(supp.begin(), supp.end(), [&](int q) { return in_s[q] != 0; })) {
      violation(b, "support-in-S", "supp(b) <= S", "outside S");
    }
    if (entry.norm_restricted > entry.norm_s) {
      violation(b, "restricted<=full", entry.norm_s, entry.norm_restricted);
    }
    const BigInt restricted = restricted_count_formula(s, table.t, table.p);
    if (BigInt(entry.norm_restricted) != restricted) {
      violation(b, "restricted-count", restricted, entry.norm_restricted);
    }
    const BigInt full = block_count_formula(s, k, table.t, table.p);
    if (BigInt(entry.norm_s) != full) violation(b, "block-count-sum", full, entry.norm_s);
  }
  return report;
}

BlockFidelity fidelity_and_distance(const BlockEntry& entry, int support_size, int k, int t, int p) {
  if (entry.norm_s == 0) throw Error(ErrorCode::ZeroBlock, "block has zero norm");
  BlockFidelity f;
  f.ratio = Rational(entry.norm_restricted, entry.norm_s);
  f.trace_distance = 2.0 * std::sqrt(std::max(0.0, 1.0 - to_double(f.ratio)));
  f.degenerate = surjection_count(support_size, t) == 0;
  const BigInt kt = ipow(k, t);
  const Rational floor = Rational(BigInt(p), BigInt(p) + kt);  // 1 / (1 + k^t/p)
  f.ratio_floor = to_double(floor);
  f.distance_bound = 2.0 * std::sqrt(kt.convert_to<double>() / p);
  if (!f.degenerate) f.within_bound = f.ratio >= floor && f.trace_distance <= f.distance_bound + 1e-12;
  return f;
}

BlockFidelity fidelity_and_distance(const BlockTable& table, const ModularSignature& b) {
  const auto it = table.entries.find(b);
  if (it == table.entries.end()) throw Error(ErrorCode::ZeroBlock, "signature " + b.str() + " has no pairs");
  return fidelity_and_distance(it->second, b.support_size(), table.k(), table.t, table.p);
}

BlockFidelity block_fidelity_formula(int support_size, int k, int t, int p) {
  const BlockEntry entry{block_count_formula(support_size, k, t, p).convert_to<std::int64_t>(),
                         restricted_count_formula(support_size, t, p).convert_to<std::int64_t>()};
  return fidelity_and_distance(entry, support_size, k, t, p);
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> block_vectors(const BlockTable& table, const ModularSignature& b) {
  const std::int64_t dim = checked_power(static_cast<std::int64_t>(table.k()) * table.p, table.t, kEnumerationBudget);
  Eigen::VectorXd restricted = Eigen::VectorXd::Zero(dim);
  Eigen::VectorXd full = Eigen::VectorXd::Zero(dim);
  const Subset supp = b.support();
  for_each_pair(table.s, table.t, table.p, [&](std::span<const int> i, std::span<const int> x, std::int64_t flat) {
    if (modular_signature(i, x, table.n, table.p) != b) return;
    full[flat] = 1.0;
    if (range_of(i) == supp) restricted[flat] = 1.0;
  });
  return {restricted, full};
}

double pure_state_trace_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& c) {
  const Eigen::VectorXd ua = a.normalized();
  const Eigen::VectorXd uc = c.normalized();
  const double overlap = ua.dot(uc);
  const Eigen::VectorXd orth = uc - overlap * ua;
  const double beta = orth.norm();
  // |ua><ua| - |uc><uc| in the orthonormal basis {ua, orth / beta}.
  Eigen::Matrix2d diff;
  diff << 1.0 - overlap * overlap, -overlap * beta, -overlap * beta, -beta * beta;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> solver(diff, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().cwiseAbs().sum();
}

double trace_norm(const DenseMatrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(hermitian, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().cwiseAbs().sum();
}

DensityCheck check_density(const DenseMatrix& m) {
  DensityCheck c;
  c.hermitian_error = (m - m.adjoint()).cwiseAbs().maxCoeff();
  c.trace = m.trace().real();
  Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(m, Eigen::EigenvaluesOnly);
  c.min_eigenvalue = solver.eigenvalues().minCoeff();
  return c;
}

DenseMatrix fourier_matrix(int p) {
  DenseMatrix f(p, p);
  const double scale = 1.0 / std::sqrt(static_cast<double>(p));
  for (int j = 0; j < p; ++j) {
    for (int i = 0; i < p; ++i) {
      const double angle = 2.0 * std::numbers::pi * static_cast<double>((i * j) % p) / p;
      f(j, i) = std::polar(scale, angle);
    }
  }
  return f;
}

DenseMatrix kronecker(const DenseMatrix& a, const DenseMatrix& b) {
  DenseMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    for (Eigen::Index c = 0; c < a.cols(); ++c) {
      out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
    }
  }
  return out;
}

Ensembles build_ensembles(const Subset& s, int t, int p, int n) {
  const Subset checked = make_subset(s, n);
  if (checked.empty()) throw Error(ErrorCode::EmptySubset, "build_ensembles over empty S");
  const int k = static_cast<int>(checked.size());
  PaddedParams{n, k, t, p, 0}.validate();
  if (checked_power(static_cast<std::int64_t>(n) * p, t, kDenseBudget) > kDenseBudget) {
    throw Error(ErrorCode::BudgetExceeded, "(n p)^t exceeds the dense budget");
  }
  if (checked_power(p, n, kPadFunctionBudget) > kPadFunctionBudget) {
    throw Error(ErrorCode::BudgetExceeded, "p^n pad functions exceed the budget");
  }

  const auto index_dim = checked_power(n, t, kDenseBudget);
  const auto pad_dim = checked_power(p, t, kDenseBudget);
  const Eigen::Index dim = index_dim * pad_dim;
  const auto flat_of = [&](std::span<const int> i, std::span<const int> x) {
    Eigen::Index fi = 0;
    Eigen::Index fx = 0;
    for (int r = 0; r < t; ++r) {
      fi = fi * n + i[r];
      fx = fx * p + x[r];
    }
    return fi * pad_dim + fx;
  };

  Ensembles out;
  out.sigma = DenseMatrix::Zero(dim, dim);
  const double amp = std::pow(static_cast<double>(k), -0.5 * t);
  std::vector<int> f(static_cast<std::size_t>(n), 0);
  std::vector<int> pads(static_cast<std::size_t>(t));
  std::int64_t functions = 0;
  do {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
    for_each_pair(checked, t, 1, [&](std::span<const int> i, std::span<const int>, std::int64_t) {
      for (int r = 0; r < t; ++r) pads[r] = f[i[r]];
      v[flat_of(i, pads)] = amp;
    });
    out.sigma += v * v.adjoint();
    ++functions;
  } while (advance(f, p));
  out.sigma /= static_cast<double>(functions);

  DenseMatrix pad_fourier = DenseMatrix::Identity(1, 1);
  for (int r = 0; r < t; ++r) pad_fourier = kronecker(pad_fourier, fourier_matrix(p));
  const DenseMatrix u = kronecker(DenseMatrix::Identity(index_dim, index_dim), pad_fourier);
  out.rho = u * out.sigma * u.adjoint();

  std::map<ModularSignature, std::pair<Eigen::VectorXcd, Eigen::VectorXcd>> blocks;
  const BlockTable table = block_norms(checked, t, p, n);
  for_each_pair(checked, t, p, [&](std::span<const int> i, std::span<const int> x, std::int64_t) {
    const auto b = modular_signature(i, x, n, p);
    auto [it, inserted] = blocks.try_emplace(b, Eigen::VectorXcd::Zero(dim), Eigen::VectorXcd::Zero(dim));
    const auto idx = flat_of(i, x);
    it->second.first[idx] = 1.0;
    if (range_of(i) == b.support()) it->second.second[idx] = 1.0;
  });

  const double scale = std::pow(static_cast<double>(k) * p, -static_cast<double>(t));
  out.rho_blocks = DenseMatrix::Zero(dim, dim);
  out.rho_prime = DenseMatrix::Zero(dim, dim);
  for (const auto& [b, vecs] : blocks) {
    const auto& entry = table.entries.at(b);
    out.rho_blocks += scale * vecs.first * vecs.first.adjoint();
    if (entry.norm_restricted == 0) {
      out.dropped_weight += scale * static_cast<double>(entry.norm_s);
      continue;
    }
    const double weight = static_cast<double>(entry.norm_s) / static_cast<double>(entry.norm_restricted);
    out.rho_prime += scale * weight * vecs.second * vecs.second.adjoint();
  }
  out.reconstruction_error = (out.rho - out.rho_blocks).cwiseAbs().maxCoeff();
  out.half_trace_distance = 0.5 * trace_norm(out.rho - out.rho_prime);
  return out;
}

namespace {

std::vector<double> to_doubles(const std::vector<Rational>& v) {
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& r : v) out.push_back(to_double(r));
  return out;
}

std::vector<Rational> exact_support_distribution(int k, int t, int p) {
  const auto ranges = range_size_distribution(k, t);
  std::vector<Rational> out(static_cast<std::size_t>(k) + 1, Rational(0));
  const Rational nonzero(p - 1, p);
  const Rational zero(1, p);
  for (int r = 0; r <= k; ++r) {
    if (ranges[r] == 0) continue;
    for (int s = 0; s <= r; ++s) {
      Rational term = ranges[r] * Rational(binomial(r, s));
      for (int i = 0; i < s; ++i) term *= nonzero;
      for (int i = s; i < r; ++i) term *= zero;
      out[s] += term;
    }
  }
  return out;
}

double max_tail_excess(const std::vector<double>& lhs, const std::vector<double>& rhs) {
  double excess = -1.0;
  double tail_l = 0.0;
  double tail_r = 0.0;
  for (std::size_t b = lhs.size(); b-- > 0;) {
    tail_l += lhs[b];
    tail_r += rhs[b];
    excess = std::max(excess, tail_l - tail_r);
  }
  return excess;
}

}  // namespace

SupportDistribution support_size_distribution(int k, int t, int p, DistributionMode mode, RandomStream* rng,
                                              long trials) {
  PaddedParams{k, k, t, p, 0}.validate();
  SupportDistribution out;
  out.range = to_doubles(range_size_distribution(k, t));
  out.support.assign(static_cast<std::size_t>(k) + 1, 0.0);
  switch (mode) {
    case DistributionMode::Exact:
      out.support = to_doubles(exact_support_distribution(k, t, p));
      break;
    case DistributionMode::Enumerated: {
      Subset s(static_cast<std::size_t>(k));
      std::iota(s.begin(), s.end(), 0);
      if (checked_power(static_cast<std::int64_t>(k) * p, t, kEnumerationBudget) > kEnumerationBudget) {
        throw Error(ErrorCode::BudgetExceeded, "k^t p^t exceeds the enumeration budget");
      }
      std::vector<std::int64_t> counts(static_cast<std::size_t>(k) + 1, 0);
      std::int64_t total = 0;
      for_each_pair(s, t, p, [&](std::span<const int> i, std::span<const int> x, std::int64_t) {
        ++counts[modular_signature(i, x, k, p).support_size()];
        ++total;
      });
      for (int b = 0; b <= k; ++b) out.support[b] = static_cast<double>(counts[b]) / static_cast<double>(total);
      break;
    }
    case DistributionMode::Sampled: {
      if (rng == nullptr || trials <= 0) throw Error(ErrorCode::DomainError, "sampled mode needs rng and trials");
      std::vector<int> indices(static_cast<std::size_t>(t));
      std::vector<int> pads(static_cast<std::size_t>(t));
      std::vector<std::int64_t> counts(static_cast<std::size_t>(k) + 1, 0);
      for (long trial = 0; trial < trials; ++trial) {
        for (int r = 0; r < t; ++r) {
          indices[r] = static_cast<int>(rng->uniform_index(static_cast<std::uint64_t>(k)));
          pads[r] = static_cast<int>(rng->uniform_index(static_cast<std::uint64_t>(p)));
        }
        ++counts[modular_signature(indices, pads, k, p).support_size()];
      }
      for (int b = 0; b <= k; ++b) out.support[b] = static_cast<double>(counts[b]) / static_cast<double>(trials);
      break;
    }
  }
  out.max_tail_excess = max_tail_excess(out.support, out.range);
  return out;
}

double t2_optimal_success(int n, int k, int l, int t, int p, DistributionMode mode, RandomStream* rng,
                          long trials) {
  if (n < k) throw Error(ErrorCode::DomainError, "t2 needs n >= k");
  if (mode == DistributionMode::Exact) {
    const auto dist = exact_support_distribution(k, t, p);
    Rational total = 0;
    for (int s = 0; s <= k; ++s) {
      if (dist[s] != 0) total += dist[s] * fill_success_prob(n, k, l, s);
    }
    return to_double(total);
  }
  const auto dist = support_size_distribution(k, t, p, mode, rng, trials);
  double total = 0.0;
  for (int s = 0; s <= k; ++s) total += dist.support[s] * to_double(fill_success_prob(n, k, l, s));
  return total;
}

double t0_threshold(int k, int l, double delta) {
  if (l < 1 || !(delta > 0.0 && delta < 0.25)) {
    throw Error(ErrorCode::DomainError, "t0 needs l >= 1 and delta in (0, 1/4)");
  }
  return k * std::log((k + 1.0) / (10.0 * l + 1.0)) + k * std::log(1.0 - 4.0 * delta);
}

PaddedVerification verify_padded_grid(const PaddedGrid& grid, const std::function<void(BlockTable&)>& mutate) {
  PaddedVerification out;
  for (int n = 1; n <= grid.max_n; ++n) {
    for (int k = 1; k <= std::min(grid.max_k, n); ++k) {
      for (int t = 1; t <= grid.max_t; ++t) {
        for (int p : grid.p_values) {
          for (const Subset& s : all_subsets(n, k)) {
            ++out.configurations;
            BlockTable table = block_norms(s, t, p, n);
            if (mutate) mutate(table);
            out.identities.merge(verify_counting_identities(table));

            const double scale = std::pow(static_cast<double>(k) * p, -static_cast<double>(t));
            double degenerate_weight = 0.0;
            for (const auto& [b, entry] : table.entries) {
              if (entry.norm_s == 0) continue;
              ++out.fidelity_checks;
              const auto fid = fidelity_and_distance(entry, b.support_size(), k, t, p);
              if (!fid.within_bound) ++out.fidelity_violations;
              if (fid.degenerate) {
                degenerate_weight += scale * static_cast<double>(entry.norm_s);
                continue;
              }
              const auto [restricted, full] = block_vectors(table, b);
              if (restricted.squaredNorm() == 0.0) {
                ++out.distance_mismatches;
                continue;
              }
              const double mismatch = std::abs(pure_state_trace_distance(restricted, full) - fid.trace_distance);
              out.max_distance_mismatch = std::max(out.max_distance_mismatch, mismatch);
              if (mismatch > 1e-10) ++out.distance_mismatches;
            }

            // Zero-pad fraction: share of pairs whose pads at the first sampled
            // element's positions sum to 0 mod p. Every pair in the zero block
            // has this property, so it bounds the degenerate weight from above.
            std::int64_t zero_pad = 0;
            std::int64_t pairs = 0;
            for_each_pair(table.s, t, p, [&](std::span<const int> i, std::span<const int> x, std::int64_t) {
              int sum = 0;
              for (int r = 0; r < t; ++r) {
                if (i[r] == i[0]) sum += x[r];
              }
              if (sum % p == 0) ++zero_pad;
              ++pairs;
            });
            const double fraction = static_cast<double>(zero_pad) / static_cast<double>(pairs);
            out.degenerate_weight_max = std::max(out.degenerate_weight_max, degenerate_weight);
            out.zero_pad_fraction_min = std::min(out.zero_pad_fraction_min, fraction);
            if (degenerate_weight > fraction + 1e-15) ++out.degenerate_weight_violations;
          }
        }
      }
    }
  }
  return out;
}

double max_block_distance(std::span<const int> ks, std::span<const int> ts, int p) {
  double best = 0.0;
  for (int k : ks) {
    for (int t : ts) {
      for (int s = 1; s <= std::min(k, t); ++s) {
        const auto fid = block_fidelity_formula(s, k, t, p);
        if (!fid.degenerate) best = std::max(best, fid.trace_distance);
      }
    }
  }
  return best;
}

double loglog_slope(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2) throw Error(ErrorCode::LengthMismatch, "slope needs >= 2 points");
  double mx = 0.0;
  double my = 0.0;
  const auto count = static_cast<double>(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += std::log(xs[i]);
    my += std::log(ys[i]);
  }
  mx /= count;
  my /= count;
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = std::log(xs[i]) - mx;
    num += dx * (std::log(ys[i]) - my);
    den += dx * dx;
  }
  return num / den;
}

}  // namespace qcc
