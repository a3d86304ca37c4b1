#include "qir/fixtures.hpp"
#include "qir/isolate.hpp"
#include "qir/parse.hpp"
#include "trace_checks.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <set>

using namespace qir;

namespace {

Polynomial P(const char* s) { return parse_polynomial(s); }
Rational Q(long n, long d = 1) { return make_rational(n, d); }

Polynomial product_of_roots(const std::vector<long>& roots) {
  Polynomial p = Polynomial::constant(Rational(1));
  for (long r : roots) p = p * Polynomial{Rational(-r), Rational(1)};
  return p;
}

// every integer root appears exactly once, as an exact root or inside exactly one bracket
std::string recovered(const IsolationResult& iso, const std::vector<long>& roots) {
  std::ostringstream err;
  for (long r : roots) {
    int hits = static_cast<int>(std::count(iso.exact_roots.begin(), iso.exact_roots.end(), Rational(r)));
    for (const auto& b : iso.brackets)
      if (b.lo() < r && r < b.hi()) ++hits;
    if (hits != 1) err << "root " << r << " found " << hits << " times\n";
  }
  if (iso.root_count() != roots.size()) err << "root count " << iso.root_count() << "\n";
  for (std::size_t i = 1; i < iso.brackets.size(); ++i)
    if (iso.brackets[i - 1].hi() > iso.brackets[i].lo()) err << "brackets overlap\n";
  return err.str();
}

}  // namespace

TEST(SquareFreePart, Examples) {
  EXPECT_EQ(square_free_part(P("x^2-2*x+1")), P("x-1"));
  EXPECT_EQ(square_free_part(P("x^5-2")), P("x^5-2"));
  EXPECT_EQ(square_free_part(P("x^3-x")), P("x^3-x"));
  EXPECT_EQ(square_free_part(P("2*x^3-2*x")), P("x^3-x"));
  EXPECT_THROW(square_free_part(Polynomial{}), ZeroPolynomial);
}

TEST(Divide, Exact) {
  const auto [q, r] = divide(P("x^3-6*x^2+11*x-6"), P("x-1"));
  EXPECT_EQ(q, P("x^2-5*x+6"));
  EXPECT_TRUE(r.is_zero());
  EXPECT_EQ(gcd(P("x^2-1"), P("x^2+2*x+1")), P("x+1"));
}

TEST(SignVariations, Examples) {
  EXPECT_EQ(sign_variations(std::vector<Rational>{1, -1, 1}), 2U);
  EXPECT_EQ(sign_variations(std::vector<Rational>{1, 0, -2}), 1U);
  EXPECT_EQ(sign_variations(std::vector<Rational>{1, 1, 1}), 0U);
}

TEST(RootBound, Examples) {
  EXPECT_EQ(root_bound(P("x^2-2")), 3);
  EXPECT_EQ(root_bound(P("x^5-2")), 3);
  EXPECT_EQ(root_bound(P("2*x-1")), Q(3, 2));
}

TEST(DescartesBound, CountsAtLeastTheRoots) {
  const Polynomial p = P("x^3-6*x^2+11*x-6");
  EXPECT_EQ(descartes_bound(p, Q(1, 2), Q(3, 2)), 1U);
  EXPECT_EQ(descartes_bound(p, Q(7, 2), 10), 0U);
  EXPECT_GE(descartes_bound(p, 0, 4), 3U);
}

TEST(Isolate, Sqrt2) {
  const IsolationResult iso = isolate_real_roots(P("x^2-2"));
  EXPECT_EQ(iso.status, IsolationStatus::Complete);
  ASSERT_EQ(iso.brackets.size(), 2U);
  EXPECT_TRUE(iso.exact_roots.empty());
  for (const auto& b : iso.brackets) EXPECT_EQ(sign_at(iso.square_free, b.lo()) * sign_at(iso.square_free, b.hi()), Sign::Negative);
  EXPECT_LE(iso.brackets[0].hi(), 0);
  EXPECT_GE(iso.brackets[1].lo(), 0);
}

TEST(Isolate, Cubic) {
  const IsolationResult iso = isolate_real_roots(P("x^3-6*x^2+11*x-6"));
  EXPECT_EQ(iso.status, IsolationStatus::Complete);
  EXPECT_EQ(recovered(iso, {1, 2, 3}), "");
}

TEST(Isolate, ZeroRootAndMultipleRoots) {
  const IsolationResult iso = isolate_real_roots(pow(P("x"), 3) * pow(P("x-1"), 2) * P("x+2"));
  EXPECT_EQ(iso.status, IsolationStatus::Complete);
  EXPECT_EQ(recovered(iso, {-2, 0, 1}), "");
}

TEST(Isolate, NoRealRoots) {
  const IsolationResult iso = isolate_real_roots(P("x^4+1"));
  EXPECT_EQ(iso.status, IsolationStatus::Complete);
  EXPECT_EQ(iso.root_count(), 0U);
}

TEST(Isolate, Errors) {
  EXPECT_THROW(isolate_real_roots(Polynomial{}), ZeroPolynomial);
}

TEST(Isolate, FriscoF1TooDeep) {
  const IsolationResult iso = isolate_real_roots(fixtures::frisco_f1(), 40);
  EXPECT_EQ(iso.status, IsolationStatus::RecursionTooDeep);
}

TEST(Isolate, CloseRootsNeedDepth) {
  // roots 1/3 and 1/3 + 1/1000: depth 5 is not enough to split them
  const Polynomial p = P("x^2 - 2003/3000*x + 1003/9000");
  EXPECT_EQ(isolate_real_roots(p, 5).status, IsolationStatus::RecursionTooDeep);
  const IsolationResult iso = isolate_real_roots(p);
  EXPECT_EQ(iso.status, IsolationStatus::Complete);
  EXPECT_EQ(iso.root_count(), 2U);
}

TEST(Isolate, RandomLinearProducts) {
  std::mt19937_64 rng(51);
  for (int i = 0; i < 100; ++i) {
    std::set<long> rs;
    const long n = check::uniform(rng, 1, 12);
    while (static_cast<long>(rs.size()) < n) rs.insert(check::uniform(rng, -50, 50));
    const std::vector<long> roots(rs.begin(), rs.end());
    const IsolationResult iso = isolate_real_roots(product_of_roots(roots));
    EXPECT_EQ(iso.status, IsolationStatus::Complete);
    EXPECT_EQ(recovered(iso, roots), "");
  }
}

TEST(Isolate, MatchesSignScanOnRandomPolys) {
  // a fine sign scan gives a lower bound on the number of real roots
  std::mt19937_64 rng(52);
  for (int i = 0; i < 60; ++i) {
    Polynomial f;
    Bracket b = Bracket::around(P("x"), -1, 1);
    if (!check::random_bracketed(rng, 5, 10, f, b)) continue;
    const IsolationResult iso = isolate_real_roots(f);
    ASSERT_EQ(iso.status, IsolationStatus::Complete);
    std::size_t scan = 0;
    const long bound = static_cast<long>(ceil(root_bound(f)).get_si());
    Sign prev = sign_at(f, Rational(-bound));
    for (long k = -bound * 64 + 1; k <= bound * 64; ++k) {
      const Sign s = sign_at(f, make_rational(k, 64));
      if (s == Sign::Zero)
        ++scan;
      else if (prev != Sign::Zero && s != prev)
        ++scan;
      prev = s;
    }
    EXPECT_GE(iso.root_count(), scan) << f;
    for (const auto& br : iso.brackets)
      EXPECT_EQ(sign_at(iso.square_free, br.lo()) * sign_at(iso.square_free, br.hi()), Sign::Negative);
    for (const auto& r : iso.exact_roots) EXPECT_EQ(sign_at(f, r), Sign::Zero);
    for (std::size_t k = 1; k < iso.brackets.size(); ++k) EXPECT_LE(iso.brackets[k - 1].hi(), iso.brackets[k].lo());
  }
}
