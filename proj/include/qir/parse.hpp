/**
 * @file parse.hpp
 * @brief Text forms of polynomials and tolerances.
 *
 *   poly  := ['+'|'-'] term (('+'|'-') term)*
 *   term  := coeff ['*'] ['x' ['^' nonneg-int]] | 'x' ['^' nonneg-int]
 *   coeff := int | int '/' posint | decimal | int '^' nonneg-int
 *
 * Whitespace is ignored. Decimals convert exactly, so "0.7" is 7/10.
 */
#pragma once

#include "qir/numerics.hpp"

#include <cctype>
#include <stdexcept>
#include <string>
#include <string_view>

namespace qir {

class ParseError : public std::invalid_argument {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::invalid_argument(what + " at position " + std::to_string(position)), position_(position) {}

  [[nodiscard]] std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

namespace detail {

class Scanner {
 public:
  explicit Scanner(std::string_view text) : text_(text) {}

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  [[nodiscard]] bool at_end() {
    skip_ws();
    return pos_ >= text_.size();
  }

  [[nodiscard]] char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  bool accept(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }

  [[nodiscard]] bool at_digit() { return std::isdigit(static_cast<unsigned char>(peek())) != 0; }

  /// Unsigned run of decimal digits.
  std::string digits() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected digits");
    return std::string(text_.substr(start, pos_ - start));
  }

  unsigned long exponent() {
    const std::size_t at = pos_;
    const std::string d = digits();
    if (d.size() > 9) throw ParseError("exponent too large", at);
    return std::stoul(d);
  }

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

  [[nodiscard]] std::size_t position() const { return pos_; }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

/// int | int '/' posint | decimal | int '^' ['-'] int   (negative powers only when allowed)
inline Rational parse_unsigned_number(Scanner& s, bool allow_negative_power) {
  const std::string whole = s.digits();
  Integer base(whole, 10);
  if (s.peek() == '.') {
    s.accept('.');
    const std::string frac = s.digits();
    Integer num(whole + frac, 10);
    Integer den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac.size());
    return make_rational(num, den);
  }
  if (s.accept('/')) {
    const std::size_t at = s.position();
    Integer den(s.digits(), 10);
    if (den == 0) throw ParseError("zero denominator", at);
    return make_rational(base, den);
  }
  if (s.accept('^')) {
    const bool negative = s.accept('-');
    if (negative && !allow_negative_power) s.fail("negative exponent");
    const unsigned long e = s.exponent();
    Integer p = ipow(base, e);
    if (negative) {
      if (p == 0) s.fail("zero to a negative power");
      return make_rational(Integer(1), p);
    }
    return Rational(p);
  }
  return Rational(base);
}

}  // namespace detail

inline Polynomial parse_polynomial(std::string_view text) {
  detail::Scanner s(text);
  if (s.at_end()) s.fail("empty polynomial");
  std::vector<Rational> coeffs;
  bool first = true;
  while (!s.at_end()) {
    Rational sign = 1;
    if (s.accept('-')) {
      sign = -1;
    } else if (!s.accept('+') && !first) {
      s.fail("expected '+' or '-'");
    }
    first = false;

    Rational coeff = 1;
    bool have_coeff = false;
    if (s.at_digit()) {
      coeff = detail::parse_unsigned_number(s, false);
      have_coeff = true;
    }
    const bool star = s.accept('*');
    std::size_t power = 0;
    if (s.accept('x')) {
      power = 1;
      if (s.accept('^')) power = s.exponent();
    } else if (!have_coeff || star) {
      s.fail("expected 'x'");
    }
    if (coeffs.size() <= power) coeffs.resize(power + 1);
    coeffs[power] += sign * coeff;
  }
  return Polynomial(std::move(coeffs));
}

/// Positive tolerance: "10^-100", "2^-32", "0.25", "1/4", "3".
inline Rational parse_tolerance(std::string_view text) {
  detail::Scanner s(text);
  if (s.at_end()) s.fail("empty tolerance");
  if (!s.at_digit()) s.fail("expected a number");
  const Rational v = detail::parse_unsigned_number(s, true);
  if (!s.at_end()) s.fail("unexpected trailing input");
  if (v <= 0) throw ParseError("tolerance must be positive", 0);
  return v;
}

/// Signed rational: int, int/posint, decimal, int^[-]int, with optional sign.
inline Rational parse_rational(std::string_view text) {
  detail::Scanner s(text);
  const bool negative = s.accept('-');
  if (!negative) s.accept('+');
  if (!s.at_digit()) s.fail("expected a number");
  Rational v = detail::parse_unsigned_number(s, true);
  if (!s.at_end()) s.fail("unexpected trailing input");
  return negative ? Rational(-v) : v;
}

}  // namespace qir
