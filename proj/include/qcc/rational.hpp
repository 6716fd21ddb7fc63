#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <Eigen/Core>

#include <string>

namespace qcc {

using BigInt = boost::multiprecision::cpp_int;

// Expression templates off: Eigen stores scalars by value and would otherwise
// capture dangling expression nodes.
using Rational = boost::multiprecision::number<
    boost::multiprecision::cpp_rational_backend, boost::multiprecision::et_off>;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }
inline std::string to_string(const Rational& r) { return r.str(); }

}  // namespace qcc

namespace Eigen {

template <>
struct NumTraits<qcc::Rational> : GenericNumTraits<qcc::Rational> {
  using Real = qcc::Rational;
  using NonInteger = qcc::Rational;
  using Nested = qcc::Rational;
  using Literal = qcc::Rational;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 10,
    AddCost = 50,
    MulCost = 100
  };
  static inline Real epsilon() { return Real(0); }
  static inline Real dummy_precision() { return Real(0); }
  static inline int digits10() { return 0; }
};

}  // namespace Eigen
