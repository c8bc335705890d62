#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace latram {

// Exact arbitrary-precision integers and rationals. Counting results
// (embedding counts, antichain counts) and Lubell masses are exact by
// contract; no floating point anywhere near them.
using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

inline BigInt big_pow(BigInt base, unsigned exp) {
  BigInt r = 1;
  while (exp) {
    if (exp & 1) r *= base;
    base *= base;
    exp >>= 1;
  }
  return r;
}

inline BigInt binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  BigInt r = 1;
  for (unsigned i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

inline BigInt falling_factorial(unsigned n, unsigned k) {
  BigInt r = 1;
  for (unsigned i = 0; i < k; ++i) r *= n - i;
  return r;
}

}  // namespace latram
