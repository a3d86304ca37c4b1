/**
 * @file fixtures.hpp
 * @brief Benchmark polynomials and the integer k-th root used to check
 * refined digits of k-th roots.
 */
#pragma once

#include "qir/numerics.hpp"

#include <stdexcept>
#include <string>

namespace qir::fixtures {

/// ((c^2 x^2 - 3)^4 + c^4 x^18) (c^2 x^2 - 3), c = 10^exponent.
/// A real root near sqrt(3)/c with four complex roots close by.
inline Polynomial frisco_f1(unsigned long exponent = 100) {
  const Rational c = pow10(static_cast<long>(exponent));
  const Polynomial inner = Polynomial{Rational(-3), Rational(0), Rational(c * c)};
  return (pow(inner, 4) + Polynomial::monomial(c * c * c * c, 18)) * inner;
}

/// x^50 + (10^exponent x - 1)^3. A real root near 10^-exponent with two
/// complex roots close by.
inline Polynomial frisco_f2(unsigned long exponent = 50) {
  const Polynomial lin{Rational(-1), pow10(static_cast<long>(exponent))};
  return Polynomial::monomial(Rational(1), 50) + pow(lin, 3);
}

/// x^k - a
inline Polynomial kth_root_polynomial(unsigned k, long a) {
  return Polynomial::monomial(Rational(1), k) - Polynomial::constant(Rational(a));
}

/// floor(n^(1/k)) for n >= 0 by binary search on r^k <= n.
inline Integer integer_kth_root(const Integer& n, unsigned long k) {
  if (n < 0) throw std::domain_error("integer_kth_root of a negative number");
  if (k == 0) throw std::domain_error("integer_kth_root with k = 0");
  if (n < 2) return n;
  // 2^(ceil(bits/k)) is above the root
  const unsigned long bits = mpz_sizeinbase(n.get_mpz_t(), 2);
  Integer lo = 0;
  Integer hi;
  mpz_ui_pow_ui(hi.get_mpz_t(), 2, bits / k + 1);
  // invariant: lo^k <= n < hi^k
  while (hi - lo > 1) {
    Integer mid = (lo + hi) / 2;
    if (ipow(mid, k) <= n)
      lo = std::move(mid);
    else
      hi = std::move(mid);
  }
  return lo;
}

/// floor(a^(1/k) * 10^digits), i.e. the first digits of the k-th root of a
/// as an integer.
inline Integer kth_root_digits(long a, unsigned long k, unsigned long digits) {
  Integer scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, k * digits);
  return integer_kth_root(Integer(a) * scale, k);
}

/// True when the interval (lo, hi) is consistent with root digits `oracle`
/// at `digits` decimal places: the oracle's cell [oracle, oracle+1) / 10^d
/// meets the interval, and one endpoint truncates to the oracle.
inline bool matches_digits(const Rational& lo, const Rational& hi, const Integer& oracle, unsigned long digits) {
  const Rational scale = pow10(static_cast<long>(digits));
  const Integer d_lo = floor(lo * scale);
  const Integer d_hi = floor(hi * scale);
  const bool touches = lo < Rational(oracle + 1) / scale && hi > Rational(oracle) / scale;
  return touches && (d_lo == oracle || d_hi == oracle);
}

}  // namespace qir::fixtures
