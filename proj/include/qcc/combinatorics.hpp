#pragma once

#include "qcc/rational.hpp"

namespace qcc {

BigInt binomial(long n, long k);
BigInt ipow(long base, long exponent);

/// Number of sequences in T^t whose range is all of T, for |T| = s:
/// sum_j (-1)^j C(s, j) (s - j)^t.
BigInt surjection_count(long s, long t);

}  // namespace qcc
