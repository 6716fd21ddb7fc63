#include "qcc/combinatorics.hpp"

namespace qcc {

BigInt binomial(long n, long k) {
  if (k < 0 || n < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  BigInt result = 1;
  for (long i = 1; i <= k; ++i) {
    result *= n - k + i;
    result /= i;
  }
  return result;
}

BigInt ipow(long base, long exponent) {
  BigInt result = 1;
  for (long i = 0; i < exponent; ++i) result *= base;
  return result;
}

BigInt surjection_count(long s, long t) {
  BigInt total = 0;
  for (long j = 0; j <= s; ++j) {
    const BigInt term = binomial(s, j) * ipow(s - j, t);
    if (j % 2 == 0) {
      total += term;
    } else {
      total -= term;
    }
  }
  return total;
}

}  // namespace qcc
