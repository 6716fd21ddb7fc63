#include "qcc/markov.hpp"

#include "qcc/algorithm.hpp"
#include "qcc/classical.hpp"

#include <cmath>

namespace qcc {

const char* to_string(Event e) {
  switch (e) {
    case Event::RogueRemoved: return "RogueRemoved";
    case Event::RogueAdded: return "RogueAdded";
    case Event::CouponCollected: return "CouponCollected";
    case Event::NoOp: return "NoOp";
  }
  return "?";
}

const char* to_string(LowerCase c) { return c == LowerCase::SmallM ? "SmallM" : "General"; }

bool in_complement_regime(int n, int k) {
  const int m = n - k;
  if (m < 1) return false;
  return 3.0 * m * (1.0 + std::log(static_cast<double>(m))) <= n;
}

double expected_K_bound(int n, int k, double t) {
  if (!in_complement_regime(n, k)) {
    throw Error(ErrorCode::RegimeViolation, "expected_K_bound needs 3m ln(e m) <= n");
  }
  const int m = n - k;
  return m * std::pow(contraction_factor<double>(n, k), t);
}

double lower_bound_c0(double delta) {
  if (!(delta > 0.0 && delta <= 1.0 / 40.0)) {
    throw Error(ErrorCode::DeltaOutOfRange, "delta must lie in (0, 1/40]");
  }
  return 0.5 * std::log((1.0 - delta) / (32.0 * delta));
}

BoundsReport lower_bound_reference(int n, int k, double delta) {
  BoundsReport report;
  report.c0 = lower_bound_c0(delta);
  report.upper_samples = sample_budget(QccParams::make(n, k, delta)).samples;
  const int m = n - k;
  const double dk = k;
  const double dm = m;
  if (m >= 1 && dm <= delta * n && dm * std::log(dm) <= report.c0 * n / 20.0) {
    report.lower_case = LowerCase::SmallM;
    report.lower_value = dk * std::log(dm) + report.c0 * n;
    report.certified = true;
  } else {
    report.lower_case = LowerCase::General;
    report.lower_value = dk * std::log(dk) - dk * std::log(std::log(dk));
    report.certified = false;
  }
  if (in_complement_regime(n, k)) {
    report.expected_K_curve = [n, k](double t) { return expected_K_bound(n, k, t); };
  } else {
    report.expected_K_curve = [k](double t) { return expected_uncollected(k, t); };
  }
  return report;
}

}  // namespace qcc
