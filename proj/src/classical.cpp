#include "qcc/classical.hpp"

#include "qcc/combinatorics.hpp"
#include "qcc/errors.hpp"

#include <cmath>
#include <string>

namespace qcc {

CollectionOutcome collect(int k, long t, RandomStream& rng) {
  if (k < 1) throw Error(ErrorCode::DomainError, "collect needs k >= 1");
  std::vector<char> seen(static_cast<std::size_t>(k), 0);
  CollectionOutcome out;
  out.samples_used = t;
  for (long i = 0; i < t; ++i) {
    const auto idx = rng.uniform_index(static_cast<std::uint64_t>(k));
    if (!seen[idx]) {
      seen[idx] = 1;
      ++out.distinct_count;
    }
  }
  for (int i = 0; i < k; ++i) {
    if (seen[i]) out.observed.push_back(i);
  }
  return out;
}

double expected_uncollected(int k, double t) { return k * std::pow(1.0 - 1.0 / k, t); }

double hypergeom_hoeffding(double t, double lambda) { return std::exp(-2.0 * lambda * lambda / t); }

Rational guess_success_prob_exact(int l, int m) {
  if (l < 1 || m < 1) throw Error(ErrorCode::DomainError, "guess_success_prob_exact needs l, m >= 1");
  const long ground = l + 5L * m;
  BigInt favourable = 0;
  for (long i = std::max(0, l - m); i <= l; ++i) {
    favourable += binomial(l, i) * binomial(5L * m, l - i);
  }
  return Rational(favourable, binomial(ground, l));
}

Rational fill_success_prob(int n, int k, int l, int s) {
  if (s < 0 || s > k || k > n) throw Error(ErrorCode::DomainError, "fill_success_prob arguments");
  const int slots = k - s;
  BigInt favourable = 0;
  for (int j = 0; j <= l && j <= slots; ++j) {
    favourable += binomial(k - s, slots - j) * binomial(n - k, j);
  }
  return Rational(favourable, binomial(n - s, slots));
}

std::vector<Rational> range_size_distribution(int k, int t) {
  std::vector<Rational> dist(static_cast<std::size_t>(k) + 1, Rational(0));
  const BigInt total = ipow(k, t);
  for (int r = 0; r <= k; ++r) {
    dist[r] = Rational(binomial(k, r) * surjection_count(r, t), total);
  }
  return dist;
}

void T3Config::validate() const {
  if (!(n >= k && k >= 1 && l >= 0 && t >= 0)) {
    throw Error(ErrorCode::DomainError, "T3 needs n >= k >= 1, l >= 0, t >= 0");
  }
}

T3Config T3Config::standard(int k, int l, long t) { return T3Config{k + 5 * l, k, l, t}; }

bool t3_trial(const T3Config& cfg, RandomStream& rng) {
  cfg.validate();
  const Subset s = random_subset(cfg.n, cfg.k, rng);
  std::vector<char> chosen(static_cast<std::size_t>(cfg.n), 0);
  int observed = 0;
  for (long i = 0; i < cfg.t; ++i) {
    const int x = s[rng.uniform_index(static_cast<std::uint64_t>(cfg.k))];
    if (!chosen[x]) {
      chosen[x] = 1;
      ++observed;
    }
  }
  std::vector<int> unseen;
  unseen.reserve(static_cast<std::size_t>(cfg.n - observed));
  for (int x = 0; x < cfg.n; ++x) {
    if (!chosen[x]) unseen.push_back(x);
  }
  const int fill = cfg.k - observed;
  for (int i = 0; i < fill; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.uniform_index(unseen.size() - i));
    std::swap(unseen[i], unseen[j]);
    chosen[unseen[i]] = 1;
  }
  const auto in_s = to_mask(s, cfg.n);
  int mismatches = 0;
  for (int x = 0; x < cfg.n; ++x) {
    if (chosen[x] && !in_s[x]) ++mismatches;
  }
  return mismatches <= cfg.l;
}

Rational t3_success_exact(const T3Config& cfg) {
  cfg.validate();
  const auto ranges = range_size_distribution(cfg.k, static_cast<int>(cfg.t));
  Rational total = 0;
  for (int r = 0; r <= cfg.k; ++r) {
    if (ranges[r] != 0) total += ranges[r] * fill_success_prob(cfg.n, cfg.k, cfg.l, r);
  }
  return total;
}

double collect_lower_bound(int k, int l, double delta) {
  if (!(delta >= 0.0 && delta < 1.0) || l < 0 || k < 1) {
    throw Error(ErrorCode::DomainError, "collect bound needs k >= 1, l >= 0, delta in [0, 1)");
  }
  return k * std::log((k + 1.0) / (l + 1.0)) + k * std::log(1.0 - delta);
}

double learn_lower_bound(int k, int l, double delta) {
  if (!(delta >= 0.0 && delta < 0.5)) {
    throw Error(ErrorCode::DomainError, "learn bound needs delta in [0, 1/2), got " + std::to_string(delta));
  }
  if (l < 1 || k < 1) throw Error(ErrorCode::DomainError, "learn bound needs k >= 1, l >= 1");
  return k * std::log((k + 1.0) / (10.0 * l + 1.0)) + k * std::log(1.0 - 2.0 * delta);
}

ClassicalBounds classical_lower_bounds(int k, int l, double delta) {
  return {collect_lower_bound(k, l, delta), learn_lower_bound(k, l, delta)};
}

}  // namespace qcc
