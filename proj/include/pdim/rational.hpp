#pragma once

#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace pdim {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline std::string to_string(const Rational& q) {
  const BigInt num = boost::multiprecision::numerator(q);
  const BigInt den = boost::multiprecision::denominator(q);
  return num.str() + "/" + den.str();
}

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

inline Rational pow(const Rational& q, unsigned n) {
  Rational r = 1;
  for (unsigned i = 0; i < n; ++i) r *= q;
  return r;
}

}  // namespace pdim
