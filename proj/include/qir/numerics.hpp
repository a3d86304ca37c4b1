/**
 * @file numerics.hpp
 * @brief Exact rational scalars and dense univariate polynomials.
 *
 * Everything in the refinement path is computed with exact rationals. The
 * scalar types are thin aliases over GMP's C++ classes; mpq_class arithmetic
 * keeps values in canonical (reduced, positive denominator) form.
 */
#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qir {

using Integer = mpz_class;
using Rational = mpq_class;

/// Builds num/den in canonical form. Throws std::domain_error on a zero denominator.
inline Rational make_rational(const Integer& num, const Integer& den) {
  if (den == 0) throw std::domain_error("make_rational: zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline Rational make_rational(long num, long den = 1) {
  return make_rational(Integer(num), Integer(den));
}

/// 2^e as an exact rational; e may be negative.
inline Rational pow2(long e) {
  Integer p;
  mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(e < 0 ? -e : e));
  return e < 0 ? Rational(Integer(1), p) : Rational(p);
}

/// 10^e as an exact rational; e may be negative.
inline Rational pow10(long e) {
  Integer p;
  mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(e < 0 ? -e : e));
  return e < 0 ? Rational(Integer(1), p) : Rational(p);
}

/// m * 2^e
inline Rational ldexp(const Integer& m, long e) {
  Rational r(m);
  if (e >= 0)
    mpq_mul_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<mp_bitcnt_t>(e));
  else
    mpq_div_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<mp_bitcnt_t>(-e));
  return r;
}

inline Integer ipow(const Integer& base, unsigned long e) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

// ---------------------------------------------------------------------------
// Sign

enum class Sign : int { Negative = -1, Zero = 0, Positive = 1 };

constexpr Sign operator*(Sign a, Sign b) {
  return static_cast<Sign>(static_cast<int>(a) * static_cast<int>(b));
}

constexpr Sign operator-(Sign s) { return static_cast<Sign>(-static_cast<int>(s)); }

inline Sign sign_of(const Integer& v) {
  const int s = sgn(v);
  return s < 0 ? Sign::Negative : (s > 0 ? Sign::Positive : Sign::Zero);
}

inline Sign sign_of(const Rational& v) {
  const int s = sgn(v);
  return s < 0 ? Sign::Negative : (s > 0 ? Sign::Positive : Sign::Zero);
}

inline const char* to_string(Sign s) {
  switch (s) {
    case Sign::Negative: return "negative";
    case Sign::Zero: return "zero";
    case Sign::Positive: return "positive";
  }
  return "?";
}

inline std::ostream& operator<<(std::ostream& os, Sign s) { return os << to_string(s); }

// ---------------------------------------------------------------------------
// Polynomial

/// Dense univariate polynomial with rational coefficients; index i holds the
/// coefficient of x^i. The zero polynomial has no coefficients and degree -1.
///
/// An integer image of the coefficients (all scaled by their common
/// denominator) is kept alongside, so that evaluation at a/b can run in
/// integers and reduce once at the end.
class Polynomial {
 public:
  Polynomial() = default;

  explicit Polynomial(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) { normalize(); }

  Polynomial(std::initializer_list<Rational> coeffs) : coeffs_(coeffs) { normalize(); }

  static Polynomial constant(const Rational& c) { return Polynomial(std::vector<Rational>{c}); }

  /// c * x^k
  static Polynomial monomial(const Rational& c, std::size_t k) {
    std::vector<Rational> v(k + 1);
    v[k] = c;
    return Polynomial(std::move(v));
  }

  static Polynomial x() { return monomial(Rational(1), 1); }

  [[nodiscard]] bool is_zero() const { return coeffs_.empty(); }
  [[nodiscard]] int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  [[nodiscard]] const std::vector<Rational>& coefficients() const { return coeffs_; }

  /// Coefficient of x^i (zero beyond the degree).
  [[nodiscard]] Rational coefficient(std::size_t i) const {
    return i < coeffs_.size() ? coeffs_[i] : Rational(0);
  }

  [[nodiscard]] const Rational& leading() const {
    if (coeffs_.empty()) throw std::domain_error("leading coefficient of the zero polynomial");
    return coeffs_.back();
  }

  /// Coefficients multiplied by common_denominator(); all integers.
  [[nodiscard]] const std::vector<Integer>& integer_coefficients() const { return int_coeffs_; }
  /// Positive lcm of the coefficient denominators (1 for the zero polynomial).
  [[nodiscard]] const Integer& common_denominator() const { return common_den_; }

  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.coeffs_ == b.coeffs_; }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    std::vector<Rational> r(std::max(a.coeffs_.size(), b.coeffs_.size()));
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = a.coefficient(i) + b.coefficient(i);
    return Polynomial(std::move(r));
  }

  friend Polynomial operator-(const Polynomial& a) {
    std::vector<Rational> r(a.coeffs_);
    for (auto& c : r) c = -c;
    return Polynomial(std::move(r));
  }

  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Rational> r(a.coeffs_.size() + b.coeffs_.size() - 1);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
      if (a.coeffs_[i] == 0) continue;
      for (std::size_t j = 0; j < b.coeffs_.size(); ++j) r[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
    return Polynomial(std::move(r));
  }

  friend Polynomial operator*(const Rational& s, const Polynomial& p) {
    std::vector<Rational> r(p.coeffs_);
    for (auto& c : r) c *= s;
    return Polynomial(std::move(r));
  }

 private:
  void normalize() {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
    for (auto& c : coeffs_) c.canonicalize();
    common_den_ = 1;
    for (const auto& c : coeffs_) mpz_lcm(common_den_.get_mpz_t(), common_den_.get_mpz_t(), c.get_den_mpz_t());
    int_coeffs_.resize(coeffs_.size());
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
      int_coeffs_[i] = coeffs_[i].get_num() * (common_den_ / coeffs_[i].get_den());
  }

  std::vector<Rational> coeffs_;
  std::vector<Integer> int_coeffs_;
  Integer common_den_ = 1;
};

/// p^k by repeated squaring.
inline Polynomial pow(Polynomial p, unsigned k) {
  Polynomial r = Polynomial::constant(Rational(1));
  while (k) {
    if (k & 1U) r = r * p;
    k >>= 1U;
    if (k) p = p * p;
  }
  return r;
}

/// Homogenized integer evaluation: sum of c_i a^i b^(n-i) over the integer
/// coefficients of p, where n = deg p. Equals common_denominator * b^n * p(a/b).
inline Integer eval_homogeneous(const Polynomial& p, const Integer& a, const Integer& b) {
  const auto& c = p.integer_coefficients();
  if (c.empty()) return 0;
  Integer acc = c.back();
  Integer bpow = 1;
  for (std::size_t i = c.size() - 1; i-- > 0;) {
    bpow *= b;
    acc *= a;
    if (c[i] != 0) acc += c[i] * bpow;
  }
  return acc;
}

/// Exact value p(x), reduced.
inline Rational eval_exact(const Polynomial& p, const Rational& x) {
  if (p.is_zero()) return 0;
  const Integer num = eval_homogeneous(p, x.get_num(), x.get_den());
  Integer den = ipow(x.get_den(), static_cast<unsigned long>(p.degree())) * p.common_denominator();
  return make_rational(num, den);
}

/// Sign of p(x). Skips the final reduction that eval_exact performs.
inline Sign sign_at(const Polynomial& p, const Rational& x) {
  if (p.is_zero()) return Sign::Zero;
  return sign_of(eval_homogeneous(p, x.get_num(), x.get_den()));
}

inline Polynomial derivative(const Polynomial& p) {
  if (p.degree() < 1) return {};
  std::vector<Rational> r(static_cast<std::size_t>(p.degree()));
  for (std::size_t i = 1; i < p.coefficients().size(); ++i)
    r[i - 1] = p.coefficients()[i] * static_cast<unsigned long>(i);
  return Polynomial(std::move(r));
}

/// p(-x)
inline Polynomial reflect(const Polynomial& p) {
  std::vector<Rational> r(p.coefficients());
  for (std::size_t i = 1; i < r.size(); i += 2) r[i] = -r[i];
  return Polynomial(std::move(r));
}

// ---------------------------------------------------------------------------
// Rounding and sizes

/// Nearest integer to x; ties go to the even neighbour.
inline Integer round_nearest(const Rational& x) {
  Integer fl;
  mpz_fdiv_q(fl.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  // twice the fractional part, compared against the denominator
  const Integer twice_rem = 2 * (x.get_num() - fl * x.get_den());
  const int c = cmp(twice_rem, x.get_den());
  if (c > 0 || (c == 0 && mpz_odd_p(fl.get_mpz_t()))) return fl + 1;
  return fl;
}

inline Integer floor(const Rational& x) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return r;
}

inline Integer ceil(const Rational& x) {
  Integer r;
  mpz_cdiv_q(r.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return r;
}

/// Number of decimal digits of |n|; 0 has one digit.
inline std::size_t decimal_digits(const Integer& n) {
  if (n == 0) return 1;
  // mpz_sizeinbase may overshoot by one for base 10
  const std::size_t k = mpz_sizeinbase(n.get_mpz_t(), 10);
  if (k == 1) return 1;
  Integer p;
  mpz_ui_pow_ui(p.get_mpz_t(), 10, k - 1);
  return mpz_cmpabs(n.get_mpz_t(), p.get_mpz_t()) >= 0 ? k : k - 1;
}

struct DigitCount {
  std::size_t numerator_digits;
  std::size_t denominator_digits;

  [[nodiscard]] std::size_t max() const { return std::max(numerator_digits, denominator_digits); }
  friend bool operator==(const DigitCount&, const DigitCount&) = default;
};

inline DigitCount decimal_digit_count(const Rational& x) {
  return {decimal_digits(x.get_num()), decimal_digits(x.get_den())};
}

/// "num/den", or just "num" for integers.
inline std::string to_string(const Rational& x) { return x.get_str(10); }

inline std::ostream& operator<<(std::ostream& os, const Polynomial& p) {
  if (p.is_zero()) return os << "0";
  bool first = true;
  for (std::size_t i = p.coefficients().size(); i-- > 0;) {
    const Rational& c = p.coefficients()[i];
    if (c == 0) continue;
    Rational mag = abs(c);
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    const bool unit = (mag == 1);
    if (!unit || i == 0) os << mag.get_str();
    if (i > 0) {
      if (!unit) os << "*";
      os << "x";
      if (i > 1) os << "^" << i;
    }
  }
  return os;
}

}  // namespace qir
