#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qcc/errors.hpp"
#include "qcc/classical.hpp"
#include "qcc/combinatorics.hpp"
#include "qcc/padded.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

using namespace qcc;

namespace {

Rational R(long a, long b = 1) { return Rational(a, b); }

ModularSignature sig(std::vector<int> dense) { return ModularSignature::from_dense(dense); }

// Brute-force surjection count.
long count_onto(int s, int t) {
  long hits = 0;
  std::vector<int> seq(static_cast<std::size_t>(t), 0);
  while (true) {
    std::vector<char> seen(static_cast<std::size_t>(s), 0);
    for (int v : seq) seen[v] = 1;
    if (std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; })) ++hits;
    int r = t - 1;
    while (r >= 0 && ++seq[r] == s) seq[r--] = 0;
    if (r < 0) break;
  }
  return hits;
}

}  // namespace

TEST_CASE("modular_signature") {
  CHECK(modular_signature(std::vector{0, 0}, std::vector{1, 1}, 2, 2).is_zero());
  CHECK(modular_signature(std::vector{0, 1}, std::vector{1, 1}, 2, 2) == sig({1, 1}));
  CHECK(modular_signature(std::vector{2, 0, 2}, std::vector{0, 0, 0}, 4, 3).is_zero());
  CHECK(modular_signature(std::vector{2, 0, 2}, std::vector{2, 1, 2}, 4, 3) == sig({1, 0, 1, 0}));
  try {
    modular_signature(std::vector{0, 1}, std::vector{1}, 2, 2);
    FAIL("expected LengthMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::LengthMismatch);
  }
  const auto b = sig({0, 2, 0, 1});
  CHECK(b.support() == Subset{1, 3});
  CHECK(b.support_size() == 2);
  CHECK(b.str() == "(0,2,0,1)");
  CHECK(b.dense() == std::vector<int>{0, 2, 0, 1});
}

TEST_CASE("surjection_count") {
  CHECK(surjection_count(1, 5) == 1);
  CHECK(surjection_count(2, 2) == 2);
  CHECK(surjection_count(3, 2) == 0);
  CHECK(surjection_count(0, 0) == 1);
  CHECK(surjection_count(0, 3) == 0);
  for (int s = 1; s <= 5; ++s) {
    for (int t = 1; t <= 6; ++t) CHECK(surjection_count(s, t) == count_onto(s, t));
  }
}

TEST_CASE("block_norms examples") {
  const auto t1 = block_norms({0, 1}, 1, 2, 2);
  CHECK(t1.entries.size() == 3);
  CHECK(t1.entries.at(sig({0, 0})).norm_s == 2);
  CHECK(t1.entries.at(sig({1, 0})).norm_s == 1);
  CHECK(t1.entries.at(sig({0, 1})).norm_s == 1);
  CHECK(t1.total_norm() == 4);

  const auto t2 = block_norms({0, 1}, 2, 2, 2);
  CHECK(t2.entries.at(sig({1, 0})).norm_s == 4);
  CHECK(t2.entries.at(sig({1, 0})).norm_restricted == 2);
  CHECK(t2.total_norm() == 16);

  const auto t3 = block_norms({0, 2}, 2, 3, 4);
  CHECK(t3.entries.count(sig({0, 1, 0, 0})) == 0);
  for (const auto& [b, e] : t3.entries) {
    for (int q : b.support()) CHECK((q == 0 || q == 2));
  }
}

TEST_CASE("block_norms budget") {
  try {
    block_norms({0, 1, 2, 3, 4, 5, 6, 7}, 8, 11, 8);
    FAIL("expected BudgetExceeded");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BudgetExceeded);
  }
}

TEST_CASE("counting identities, worked example and zero signature") {
  CHECK(block_count_formula(1, 2, 2, 2) == 4);
  CHECK(restricted_count_formula(0, 3, 2) == 0);
  const auto table = block_norms({0, 1}, 2, 2, 2);
  CHECK(table.entries.at(sig({0, 0})).norm_restricted == 0);
  CHECK(verify_counting_identities(table).ok());
}

TEST_CASE("counting identities hold over the full grid") {
  const auto v = verify_padded_grid(PaddedGrid{});
  CHECK(v.identities.ok());
  CHECK(v.identities.checks > 1000);
  CHECK(v.fidelity_violations == 0);
  CHECK(v.distance_mismatches == 0);
  CHECK(v.max_distance_mismatch < 1e-10);
  CHECK(v.degenerate_weight_violations == 0);
  CHECK(v.ok());
}

TEST_CASE("a flipped count is reported with its witness") {
  PaddedGrid grid{2, 2, 2, {2}};
  bool done = false;
  const auto v = verify_padded_grid(grid, [&](BlockTable& t) {
    if (!done) {
      ++t.entries.begin()->second.norm_s;
      done = true;
    }
  });
  CHECK_FALSE(v.ok());
  REQUIRE_FALSE(v.identities.violations.empty());
  const auto& w = v.identities.violations.front();
  CHECK(w.s == Subset{0});
  CHECK_FALSE(w.check.empty());
}

TEST_CASE("fidelity_and_distance examples") {
  const auto t1 = block_norms({0, 1}, 1, 2, 2);
  const auto a = fidelity_and_distance(t1, sig({1, 0}));
  CHECK(a.ratio == 1);
  CHECK(a.trace_distance == 0.0);
  CHECK_FALSE(a.degenerate);

  const auto t2 = block_norms({0, 1}, 2, 2, 2);
  const auto b = fidelity_and_distance(t2, sig({1, 0}));
  CHECK(b.ratio == R(1, 2));
  CHECK(b.trace_distance == doctest::Approx(std::sqrt(2.0)));
  CHECK(b.distance_bound == doctest::Approx(2.0 * std::sqrt(2.0)));
  CHECK(b.within_bound);

  const auto z = fidelity_and_distance(t2, sig({0, 0}));
  CHECK(z.degenerate);
  CHECK(z.ratio == 0);

  try {
    fidelity_and_distance(t2, sig({1, 1, 1}));
    FAIL("expected ZeroBlock");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ZeroBlock);
  }
}

TEST_CASE("closed-form fidelity matches enumeration and the eigenvalue route") {
  for (int k = 1; k <= 3; ++k) {
    for (int t = 1; t <= 3; ++t) {
      for (int p : {2, 3, 5}) {
        Subset s(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i) s[i] = i;
        const auto table = block_norms(s, t, p, k);
        for (const auto& [b, e] : table.entries) {
          const auto enumerated = fidelity_and_distance(table, b);
          const auto formula = block_fidelity_formula(b.support_size(), k, t, p);
          CHECK(enumerated.ratio == formula.ratio);
          if (enumerated.degenerate) continue;
          CHECK(enumerated.ratio >= Rational(p, p + static_cast<long>(std::pow(k, t))));
          const auto [restricted, full] = block_vectors(table, b);
          CHECK(std::abs(pure_state_trace_distance(restricted, full) - enumerated.trace_distance) < 1e-10);
        }
      }
    }
  }
}

TEST_CASE("blocks are orthogonal") {
  const auto table = block_norms({0, 1, 2}, 2, 3, 3);
  std::vector<Eigen::VectorXd> vs;
  for (const auto& [b, e] : table.entries) vs.push_back(block_vectors(table, b).second);
  for (std::size_t i = 0; i < vs.size(); ++i) {
    for (std::size_t j = i + 1; j < vs.size(); ++j) CHECK(std::abs(vs[i].dot(vs[j])) < 1e-12);
  }
}

TEST_CASE("pure_state_trace_distance") {
  Eigen::VectorXd a(2);
  Eigen::VectorXd c(2);
  a << 1, 0;
  c << 0, 1;
  CHECK(pure_state_trace_distance(a, c) == doctest::Approx(2.0));
  CHECK(pure_state_trace_distance(a, a) == doctest::Approx(0.0));
  c << 1, 1;
  CHECK(pure_state_trace_distance(a, c) == doctest::Approx(2.0 * std::sqrt(0.5)));
}

TEST_CASE("ensembles for S = {1,2}, t = 1, p = 2") {
  const auto e = build_ensembles({0, 1}, 1, 2, 2);
  CHECK(e.sigma.rows() == 4);
  CHECK(check_density(e.sigma).ok());
  CHECK(check_density(e.rho).ok());
  CHECK(std::abs(e.sigma.trace().real() - 1.0) < 1e-12);
  CHECK(e.reconstruction_error < 1e-10);
  Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(e.rho, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd ev = solver.eigenvalues();
  CHECK(ev[3] == doctest::Approx(0.5));
  CHECK(ev[2] == doctest::Approx(0.25));
  CHECK(ev[1] == doctest::Approx(0.25));
  CHECK(std::abs(ev[0]) < 1e-12);
  // Explicit sigma: each pad function contributes a rank-one term over {|0,f0>, |1,f1>}.
  DenseMatrix expected = DenseMatrix::Zero(4, 4);
  for (int f0 = 0; f0 < 2; ++f0) {
    for (int f1 = 0; f1 < 2; ++f1) {
      Eigen::VectorXcd v = Eigen::VectorXcd::Zero(4);
      v[0 * 2 + f0] = 1.0 / std::sqrt(2.0);
      v[1 * 2 + f1] = 1.0 / std::sqrt(2.0);
      expected += 0.25 * v * v.adjoint();
    }
  }
  CHECK((e.sigma - expected).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("ensemble reconstruction and error term over small cases") {
  for (auto [s, n, t, p] : {std::tuple{Subset{0, 1}, 2, 1, 2}, std::tuple{Subset{0, 1}, 2, 2, 2},
                            std::tuple{Subset{1}, 2, 2, 2}, std::tuple{Subset{0, 2}, 3, 1, 3},
                            std::tuple{Subset{0, 1}, 3, 1, 2}, std::tuple{Subset{0, 1, 2}, 4, 1, 2}}) {
    const auto e = build_ensembles(s, t, p, n);
    const double k = static_cast<double>(s.size());
    const double kt_over_p = std::pow(k, t) / p;
    CHECK(check_density(e.sigma).ok());
    CHECK(check_density(e.rho).ok());
    CHECK(e.reconstruction_error < 1e-10);
    CHECK(e.half_trace_distance <= std::sqrt(kt_over_p) + 1e-12);
    CHECK(e.dropped_weight <= kt_over_p + 1e-12);
    CHECK(std::abs(e.rho_prime.trace().real() - (1.0 - e.dropped_weight)) < 1e-10);
  }
  try {
    build_ensembles({0, 1, 2}, 3, 3, 3);
    FAIL("expected BudgetExceeded");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BudgetExceeded);
  }
}

TEST_CASE("fourier matrix is unitary") {
  for (int p : {2, 3, 5}) {
    const DenseMatrix f = fourier_matrix(p);
    CHECK((f * f.adjoint() - DenseMatrix::Identity(p, p)).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("support size distribution") {
  const auto a = support_size_distribution(2, 1, 2, DistributionMode::Exact);
  CHECK(a.support[0] == doctest::Approx(0.5));
  CHECK(a.support[1] == doctest::Approx(0.5));
  CHECK(a.range[1] == doctest::Approx(1.0));
  CHECK(a.max_tail_excess <= 1e-15);

  for (int k = 1; k <= 4; ++k) {
    for (int t = 1; t <= 4; ++t) {
      for (int p : {2, 3}) {
        const auto exact = support_size_distribution(k, t, p, DistributionMode::Exact);
        const auto enumerated = support_size_distribution(k, t, p, DistributionMode::Enumerated);
        for (int s = 0; s <= k; ++s) CHECK(std::abs(exact.support[s] - enumerated.support[s]) < 1e-12);
        CHECK(enumerated.max_tail_excess <= 1e-12);
      }
    }
  }

  RandomStream rng(4);
  const long trials = 40000;
  const auto sampled = support_size_distribution(4, 3, 101, DistributionMode::Sampled, &rng, trials);
  const double target = sampled.range[3];
  CHECK(std::abs(sampled.support[3] - target) < 0.05);
  CHECK(sampled.max_tail_excess <= 4.0 * std::sqrt(0.25 / trials));
}

TEST_CASE("t2_optimal_success") {
  CHECK(to_double(fill_success_prob(20, 6, 1, 6)) == 1.0);
  CHECK(t2_optimal_success(6, 6, 0, 3, 3) == doctest::Approx(1.0));
  const double t2 = t2_optimal_success(11, 6, 1, 3, 3);
  const double t3 = to_double(t3_success_exact(T3Config::standard(6, 1, 3)));
  CHECK(t2 <= t3);
  RandomStream rng(8);
  const double sampled = t2_optimal_success(11, 6, 1, 3, 3, DistributionMode::Sampled, &rng, 50000);
  CHECK(std::abs(sampled - t2) < 0.02);
}

TEST_CASE("t0_threshold") {
  CHECK(t0_threshold(100, 1, 0.125) == doctest::Approx(152.4).epsilon(1e-3));
  CHECK(std::abs(t0_threshold(10, 1, 1e-6)) < 1e-3);
  for (double d : {0.25, 0.3, 0.0}) {
    try {
      t0_threshold(10, 1, d);
      FAIL("expected DomainError");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::DomainError);
    }
  }
}

TEST_CASE("loglog_slope recovers a power law") {
  const std::vector<double> xs{2, 3, 5, 11, 101};
  std::vector<double> ys;
  for (double x : xs) ys.push_back(3.0 * std::pow(x, -0.5));
  CHECK(loglog_slope(xs, ys) == doctest::Approx(-0.5));
}
