/**
 * @file approx.hpp
 * @brief Reduced-precision polynomial evaluation with a certified relative error.
 *
 * Values are carried as balls: a dyadic centre m*2^e with p significant bits
 * plus a dyadic radius bounding the accumulated error. Radii are always
 * rounded upwards, so the true value stays inside every ball.
 */
#pragma once

#include "qir/numerics.hpp"

#include <optional>

namespace qir {

/// mantissa * 2^exponent, with |v - value()| <= relative_error_bound * |v|
/// for the true value v.
struct ApproxValue {
  Integer mantissa;
  long exponent = 0;
  Rational relative_error_bound;

  [[nodiscard]] Rational value() const { return ldexp(mantissa, exponent); }
  [[nodiscard]] Sign sign() const { return sign_of(mantissa); }
};

namespace detail {

inline long bit_length(const Integer& m) {
  return m == 0 ? 0 : static_cast<long>(mpz_sizeinbase(m.get_mpz_t(), 2));
}

struct Dyadic {
  Integer m;
  long e = 0;

  [[nodiscard]] Rational to_rational() const { return ldexp(m, e); }
};

inline Integer shl(const Integer& m, long s) {
  Integer r;
  mpz_mul_2exp(r.get_mpz_t(), m.get_mpz_t(), static_cast<mp_bitcnt_t>(s));
  return r;
}

/// Exact sum.
inline Dyadic add(const Dyadic& a, const Dyadic& b) {
  if (a.m == 0) return b;
  if (b.m == 0) return a;
  if (a.e <= b.e) return {a.m + shl(b.m, b.e - a.e), a.e};
  return {shl(a.m, a.e - b.e) + b.m, b.e};
}

inline Dyadic mul(const Dyadic& a, const Dyadic& b) { return {a.m * b.m, a.e + b.e}; }

inline Dyadic abs(const Dyadic& a) { return {::abs(a.m), a.e}; }

/// Non-negative upper bound of a non-negative dyadic, trimmed to `bits` bits.
inline Dyadic round_up(const Dyadic& a, long bits) {
  const long len = bit_length(a.m);
  if (len <= bits) return a;
  const long s = len - bits;
  Integer q;
  mpz_cdiv_q_2exp(q.get_mpz_t(), a.m.get_mpz_t(), static_cast<mp_bitcnt_t>(s));
  return {q, a.e + s};
}

constexpr long kRadiusBits = 40;

/// Upper bound on a + b for non-negative a, b. A summand far below the other
/// one's last bit is absorbed by bumping that bit.
inline Dyadic add_up(const Dyadic& a, const Dyadic& b) {
  if (a.m == 0) return b;
  if (b.m == 0) return a;
  const long top_a = a.e + bit_length(a.m);
  const long top_b = b.e + bit_length(b.m);
  const Dyadic& big = top_a >= top_b ? a : b;
  const Dyadic& small = top_a >= top_b ? b : a;
  const long top_small = small.e + bit_length(small.m);
  if (top_small < big.e) return round_up({big.m + 1, big.e}, kRadiusBits);
  return round_up(add(a, b), kRadiusBits);
}

struct Ball {
  Dyadic center;
  Dyadic radius;  // non-negative
};

/// Truncates the centre to `prec` significant bits, widening the radius.
inline Ball round(Ball x, long prec) {
  const long len = bit_length(x.center.m);
  if (len <= prec) return x;
  const long s = len - prec;
  Integer q;
  mpz_tdiv_q_2exp(q.get_mpz_t(), x.center.m.get_mpz_t(), static_cast<mp_bitcnt_t>(s));
  x.center = {q, x.center.e + s};
  x.radius = add_up(x.radius, {Integer(1), x.center.e});
  return x;
}

inline Ball ball_of(const Rational& x, long prec) {
  const Integer& num = x.get_num();
  const Integer& den = x.get_den();
  if (mpz_popcount(den.get_mpz_t()) == 1) {
    // dyadic already
    const long k = bit_length(den) - 1;
    return round({{num, -k}, {Integer(0), 0}}, prec);
  }
  const long k = prec - (bit_length(num) - bit_length(den)) + 1;
  Integer scaled = k >= 0 ? shl(num, k) : num;
  Integer d = k >= 0 ? den : shl(den, -k);
  Integer q;
  mpz_tdiv_q(q.get_mpz_t(), scaled.get_mpz_t(), d.get_mpz_t());
  return {{q, -k}, {Integer(1), -k}};
}

inline Ball mul(const Ball& a, const Ball& b, long prec) {
  Dyadic r = round_up(mul(abs(a.center), b.radius), kRadiusBits);
  r = add_up(r, round_up(mul(abs(b.center), a.radius), kRadiusBits));
  r = add_up(r, round_up(mul(a.radius, b.radius), kRadiusBits));
  return round({mul(a.center, b.center), r}, prec);
}

inline Ball add(const Ball& a, const Ball& b, long prec) {
  return round({add(a.center, b.center), add_up(a.radius, b.radius)}, prec);
}

inline Ball horner(const Polynomial& p, const Rational& x, long prec) {
  const auto& c = p.coefficients();
  const Ball xb = ball_of(x, prec);
  Ball acc = ball_of(c.back(), prec);
  for (std::size_t i = c.size() - 1; i-- > 0;) {
    acc = mul(acc, xb, prec);
    if (c[i] != 0) acc = add(acc, ball_of(c[i], prec), prec);
  }
  return acc;
}

}  // namespace detail

/// Evaluates p(x) to a relative error of at most 2^-bits.
///
/// Returns std::nullopt (ambiguous) when the enclosure still contains zero
/// after the internal precision escalation; this is always the outcome when
/// p(x) = 0, and may be the outcome under heavy cancellation. The caller
/// decides whether to retry with more bits or to evaluate exactly.
inline std::optional<ApproxValue> eval_approx(const Polynomial& p, const Rational& x, long bits) {
  if (bits < 1) throw std::invalid_argument("eval_approx: bits must be positive");
  if (p.is_zero()) return std::nullopt;
  constexpr int kEscalations = 8;
  long prec = bits + 8 + 2 * detail::bit_length(Integer(p.degree() + 1));
  const Rational threshold = pow2(bits) + 1;
  for (int attempt = 0; attempt <= kEscalations; ++attempt, prec *= 2) {
    const detail::Ball b = detail::horner(p, x, prec);
    const Rational c = abs(b.center.to_rational());
    const Rational r = b.radius.to_rational();
    if (c == 0 && r == 0) return std::nullopt;  // exact zero
    if (c == 0 || r * threshold > c) continue;
    return ApproxValue{b.center.m, b.center.e, r / (c - r)};
  }
  return std::nullopt;
}

}  // namespace qir
