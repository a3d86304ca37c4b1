/**
 * @file isolate.hpp
 * @brief A simple Descartes-rule real root isolator.
 *
 * The search interval (0, B) is bisected recursively. On each piece (a, b)
 * the polynomial is moved to (0, 1) and the sign variations of
 * (x+1)^n q(1/(x+1)) bound the number of roots inside: zero variations
 * discard the piece, one variation gives an isolating bracket, more split
 * it again. Negative roots come from p(-x). There is no coefficient scaling
 * or other refinement of the method, so tight root clusters exhaust the
 * depth limit and the result is flagged RecursionTooDeep.
 */
#pragma once

#include "qir/refine.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>
#include <vector>

namespace qir {

class ZeroPolynomial : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Quotient and remainder of a by a nonzero b.
inline std::pair<Polynomial, Polynomial> divide(const Polynomial& a, const Polynomial& b) {
  if (b.is_zero()) throw std::domain_error("polynomial division by zero");
  if (a.degree() < b.degree()) return {Polynomial{}, a};
  std::vector<Rational> rem(a.coefficients());
  const std::size_t db = static_cast<std::size_t>(b.degree());
  std::vector<Rational> quo(rem.size() - db);
  const Rational& lead = b.leading();
  for (std::size_t i = quo.size(); i-- > 0;) {
    Rational c = rem[i + db] / lead;
    if (c != 0)
      for (std::size_t j = 0; j <= db; ++j) rem[i + j] -= c * b.coefficients()[j];
    quo[i] = std::move(c);
  }
  rem.resize(db);
  return {Polynomial(std::move(quo)), Polynomial(std::move(rem))};
}

inline Polynomial monic(const Polynomial& p) {
  if (p.is_zero()) return p;
  return Rational(1 / p.leading()) * p;
}

/// Monic gcd over the rationals; gcd(0, 0) = 0.
inline Polynomial gcd(Polynomial a, Polynomial b) {
  while (!b.is_zero()) {
    Polynomial r = divide(a, b).second;
    a = std::move(b);
    b = monic(r);
  }
  return monic(a);
}

/// p / gcd(p, p'), monic. Same distinct roots as p, all simple.
inline Polynomial square_free_part(const Polynomial& p) {
  if (p.is_zero()) throw ZeroPolynomial("square_free_part of the zero polynomial");
  if (p.degree() == 0) return Polynomial::constant(Rational(1));
  return monic(divide(p, gcd(p, derivative(p))).first);
}

/// Sign changes between consecutive nonzero entries.
template <class Range>
std::size_t sign_variations(const Range& coeffs) {
  std::size_t count = 0;
  int last = 0;
  for (const auto& c : coeffs) {
    const int s = sgn(c);
    if (s == 0) continue;
    if (last != 0 && s != last) ++count;
    last = s;
  }
  return count;
}

/// Cauchy bound 1 + max |a_i| / |a_n|: every real root lies in (-B, B).
inline Rational root_bound(const Polynomial& p) {
  if (p.degree() < 1) throw std::invalid_argument("root_bound needs a nonconstant polynomial");
  Rational m = 0;
  const Rational lead = abs(p.leading());
  for (std::size_t i = 0; i + 1 < p.coefficients().size(); ++i) m = std::max(m, Rational(abs(p.coefficients()[i]) / lead));
  return 1 + m;
}

namespace detail {

using IntPoly = std::vector<Integer>;

/// q(x) -> q(x + 1), in place.
inline void taylor_shift_one(IntPoly& c) {
  const std::size_t n = c.size();
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t j = n - 1; j-- > i;) c[j] += c[j + 1];
}

/// Variations of (x+1)^n q(1/(x+1)): an upper bound, of the same parity,
/// on the number of roots of q in (0, 1).
inline std::size_t descartes_01(const IntPoly& q) {
  IntPoly t(q.rbegin(), q.rend());
  taylor_shift_one(t);
  return sign_variations(t);
}

inline void remove_content(IntPoly& c) {
  Integer g = 0;
  for (const auto& v : c) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
  if (g > 1)
    for (auto& v : c) mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), g.get_mpz_t());
}

/// Integer coefficients of a positive multiple of p(lo + w x).
inline IntPoly rescale(const Polynomial& p, const Rational& lo, const Rational& w) {
  // p(lo + w x) with rational arithmetic, then clear denominators
  std::vector<Rational> c(p.coefficients());
  const std::size_t n = c.size();
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t j = n - 1; j-- > i;) c[j] += lo * c[j + 1];
  Rational wp = 1;
  for (auto& v : c) {
    v *= wp;
    wp *= w;
  }
  Integer l = 1;
  for (const auto& v : c) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den_mpz_t());
  IntPoly out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = c[i].get_num() * (l / c[i].get_den());
  remove_content(out);
  return out;
}

}  // namespace detail

/// Descartes bound for the roots of p in the open interval (lo, hi).
inline std::size_t descartes_bound(const Polynomial& p, const Rational& lo, const Rational& hi) {
  if (!(lo < hi)) throw std::invalid_argument("descartes_bound needs lo < hi");
  return detail::descartes_01(detail::rescale(p, lo, hi - lo));
}

enum class IsolationStatus { Complete, RecursionTooDeep };

struct IsolationResult {
  Polynomial square_free;          ///< the polynomial every bracket refers to
  std::vector<Bracket> brackets;   ///< sorted, pairwise disjoint
  std::vector<Rational> exact_roots;  ///< sorted
  IsolationStatus status = IsolationStatus::Complete;

  [[nodiscard]] std::size_t root_count() const { return brackets.size() + exact_roots.size(); }
};

namespace detail {

class Isolator {
 public:
  Isolator(const Polynomial& sf, std::size_t max_depth, IsolationResult& out)
      : sf_(sf), max_depth_(max_depth), out_(out) {}

  /// Roots of `search` in (0, bound); `mirrored` maps them to (-bound, 0).
  void run(const Polynomial& search, const Rational& bound, bool mirrored) {
    mirrored_ = mirrored;
    visit(rescale(search, 0, bound), 0, bound, 0);
  }

 private:
  Rational to_original(const Rational& t) const { return mirrored_ ? Rational(-t) : t; }

  void visit(IntPoly q, const Rational& lo, const Rational& w, std::size_t depth) {
    const std::size_t v = descartes_01(q);
    if (v == 0) return;
    if (v == 1 && emit(lo, lo + w)) return;
    if (depth >= max_depth_) {
      out_.status = IsolationStatus::RecursionTooDeep;
      return;
    }
    const Rational half = w / 2;
    const Rational mid = lo + half;
    if (sign_at(sf_, to_original(mid)) == Sign::Zero) out_.exact_roots.push_back(to_original(mid));
    // left: 2^n q(x/2); right: left shifted by one
    const std::size_t n = q.size() - 1;
    for (std::size_t i = 0; i <= n; ++i) mpz_mul_2exp(q[i].get_mpz_t(), q[i].get_mpz_t(), n - i);
    IntPoly right = q;
    taylor_shift_one(right);
    remove_content(q);
    remove_content(right);
    visit(std::move(q), lo, half, depth + 1);
    visit(std::move(right), mid, half, depth + 1);
  }

  /// One root in the open interval (a, b) of the search variable. Returns
  /// false when both ends are roots, so the caller splits instead.
  bool emit(Rational a, Rational b) {
    Rational fa = eval_exact(sf_, to_original(a));
    Rational fb = eval_exact(sf_, to_original(b));
    if (fa == 0 && fb == 0) return false;
    // Pull a root endpoint inward until the sign flips across the root.
    auto tighten = [&](Rational& end, Rational& f_end, const Rational& other, const Rational& f_other) {
      Rational step = (other - end) / 2;
      for (;;) {
        Rational c = end + step;
        Rational fc = eval_exact(sf_, to_original(c));
        if (fc == 0) {
          out_.exact_roots.push_back(to_original(c));
          return false;
        }
        if (sign_of(fc) != sign_of(f_other)) {
          end = std::move(c);
          f_end = std::move(fc);
          return true;
        }
        step /= 2;
      }
    };
    if (fa == 0 && !tighten(a, fa, b, fb)) return true;
    if (fb == 0 && !tighten(b, fb, a, fa)) return true;
    if (mirrored_)
      out_.brackets.emplace_back(-b, -a, std::move(fb), std::move(fa));
    else
      out_.brackets.emplace_back(std::move(a), std::move(b), std::move(fa), std::move(fb));
    return true;
  }

  const Polynomial& sf_;
  std::size_t max_depth_;
  IsolationResult& out_;
  bool mirrored_ = false;
};

}  // namespace detail

/// Isolates the real roots of p. Brackets and exact roots refer to the
/// square-free part of p. Exceeding max_depth leaves the result partial and
/// sets status to RecursionTooDeep.
inline IsolationResult isolate_real_roots(const Polynomial& p, std::size_t max_depth = 128) {
  if (p.is_zero()) throw ZeroPolynomial("cannot isolate the roots of the zero polynomial");
  if (p.degree() < 1) throw std::invalid_argument("isolate_real_roots needs a nonconstant polynomial");

  IsolationResult out;
  out.square_free = square_free_part(p);
  Polynomial search = out.square_free;
  if (search.coefficient(0) == 0) {
    out.exact_roots.push_back(0);
    search = divide(search, Polynomial::x()).first;
  }
  if (search.degree() >= 1) {
    // dyadic bound keeps every bisection point dyadic
    const Integer b = ceil(root_bound(search));
    Integer bound = 1;
    while (bound < b) bound *= 2;
    detail::Isolator iso(out.square_free, max_depth, out);
    iso.run(search, Rational(bound), false);
    iso.run(reflect(search), Rational(bound), true);
  }
  std::sort(out.exact_roots.begin(), out.exact_roots.end());
  out.exact_roots.erase(std::unique(out.exact_roots.begin(), out.exact_roots.end()), out.exact_roots.end());
  std::sort(out.brackets.begin(), out.brackets.end(),
            [](const Bracket& x, const Bracket& y) { return x.lo() < y.lo(); });
  return out;
}

}  // namespace qir
