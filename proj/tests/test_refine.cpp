#include "qir/parse.hpp"
#include "qir/refine.hpp"
#include "trace_checks.hpp"

#include <gtest/gtest.h>

using namespace qir;

namespace {

Polynomial P(const char* s) { return parse_polynomial(s); }
Rational Q(long n, long d = 1) { return make_rational(n, d); }
RefinementFactor factor(unsigned long n) { return RefinementFactor(Integer(n)); }
RefinementFactor factor_pow2(unsigned long e) {
  Integer n;
  mpz_ui_pow_ui(n.get_mpz_t(), 2, e);
  return RefinementFactor(n);
}

}  // namespace

TEST(Width, Examples) {
  const Polynomial f = P("x^2-2");
  EXPECT_EQ(width(Bracket::around(f, 1, 2)), 1);
  EXPECT_EQ(width(Bracket::around(f, Q(5, 4), Q(3, 2))), Q(1, 4));
  EXPECT_EQ(width(Bracket::around(f, Q(45, 32), Q(91, 64))), Q(1, 64));
}

TEST(BracketTest, Invariants) {
  const Polynomial f = P("x^2-2");
  EXPECT_THROW(Bracket::around(f, 0, 1), InvalidBracket);  // f(0) = -2, f(1) = -1
  EXPECT_THROW(Bracket::around(f, 2, 1), InvalidBracket);
  EXPECT_THROW(Bracket::around(P("x-1"), 1, 2), InvalidBracket);  // zero endpoint
  const Bracket b = Bracket::around(f, 1, 2);
  EXPECT_EQ(b.sign_lo(), Sign::Negative);
  EXPECT_EQ(b.sign_hi(), Sign::Positive);
}

TEST(RefinementFactorTest, Schedule) {
  EXPECT_TRUE(factor(4).on_schedule());
  EXPECT_TRUE(factor(16).on_schedule());
  EXPECT_TRUE(factor(256).on_schedule());
  EXPECT_TRUE(factor(65536).on_schedule());
  EXPECT_FALSE(factor(8).on_schedule());
  EXPECT_FALSE(factor(64).on_schedule());
  EXPECT_FALSE(factor(5).on_schedule());
  EXPECT_EQ(factor(16).squared(), factor(256));
  EXPECT_EQ(factor(256).square_root(), factor(16));
  EXPECT_EQ(factor(16).log2_ceil(), 4);
  EXPECT_EQ(factor(17).log2_ceil(), 5);
  EXPECT_THROW(factor(3), std::invalid_argument);
}

TEST(PredictIndex, Examples) {
  EXPECT_EQ(predict_index(Q(-1), Q(1), 16), 8);
  EXPECT_EQ(predict_index(Q(-1), Q(30), 4), 0);
  EXPECT_EQ(predict_index(Q(-7, 16), Q(1, 4), 16), 10);
}

TEST(PredictIndex, StaysInRange) {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 500; ++i) {
    const Rational a = -make_rational(check::uniform(rng, 1, 1000000), check::uniform(rng, 1, 1000));
    const Rational b = make_rational(check::uniform(rng, 1, 1000000), check::uniform(rng, 1, 1000));
    const Integer n = Integer(4) << static_cast<unsigned>(check::uniform(rng, 0, 60));
    const Integer k1 = predict_index(a, b, n);
    const Integer k2 = predict_index(-a, -b, n);
    EXPECT_GE(k1, 0);
    EXPECT_LE(k1, n);
    EXPECT_EQ(k1, k2);
  }
}

TEST(RefineByFactor, SuccessOnSqrt2) {
  const Polynomial f = P("x^2-2");
  const StepOutcome s = refine_by_factor(f, Bracket::around(f, Q(5, 4), Q(3, 2)), factor(16));
  ASSERT_EQ(s.kind, OutcomeKind::Success);
  EXPECT_EQ(s.bracket->lo(), Q(45, 32));
  EXPECT_EQ(s.bracket->hi(), Q(91, 64));
  EXPECT_EQ(s.bracket->value_lo(), Q(-23, 1024));
  EXPECT_EQ(s.bracket->value_hi(), Q(89, 4096));
  EXPECT_EQ(s.cost.evaluations, 2U);
}

TEST(RefineByFactor, ExactRootAtPrediction) {
  const Polynomial f = P("x-1");
  const StepOutcome s = refine_by_factor(f, Bracket::around(f, 0, 2), factor(16));
  ASSERT_EQ(s.kind, OutcomeKind::ExactRoot);
  EXPECT_EQ(*s.root, 1);
}

TEST(RefineByFactor, ExactRootAtNeighbour) {
  // f(0) = -5, f(2) = 7: kappa = round(80/12) = 7 -> x = 7/8, f < 0 -> test 1 (root)
  const Polynomial f = P("x^2+4*x-5");
  const StepOutcome s = refine_by_factor(f, Bracket::around(f, 0, 2), factor(16));
  ASSERT_EQ(s.kind, OutcomeKind::ExactRoot);
  EXPECT_EQ(*s.root, 1);
}

TEST(RefineByFactor, HugeFactorOnStartingBracket) {
  // kappa = 0 and w = 2^-255 already lies past the root 10^-100
  const Polynomial f = P("10^200*x^2-1");
  const StepOutcome s = refine_by_factor(f, Bracket::around(f, 0, 2), factor_pow2(256));
  ASSERT_EQ(s.kind, OutcomeKind::Success);
  EXPECT_EQ(s.bracket->lo(), 0);
  EXPECT_EQ(s.bracket->hi(), pow2(-255));
  // the left end is cached, only x + w is evaluated
  EXPECT_EQ(s.cost.evaluations, 1U);
}

TEST(RefineByFactor, IllustrativeFailureAfterSevenSuccesses) {
  const Polynomial f = P("10^200*x^2-1");
  const RefineReport rep = refine_interval(f, Bracket::around(f, 0, 2), pow10(-70));
  ASSERT_EQ(rep.trace.size(), 7U);
  for (const auto& r : rep.trace) EXPECT_EQ(r.outcome, OutcomeKind::Success);
  const Bracket& b = std::get<Bracket>(rep.result);
  const StepOutcome s = refine_by_factor(f, b, factor_pow2(256));
  EXPECT_EQ(s.kind, OutcomeKind::Failure);
}

TEST(RefineByFactor, CachedEndpoints) {
  // kappa = N names hi itself, so only hi - w is evaluated
  const Rational k = pow10(200);
  const Polynomial f{Rational(4 * k - 1), Rational(-4 * k), k};  // c (x - 2)^2 - 1
  const Bracket b = Bracket::around(f, 0, 2);
  ASSERT_EQ(predict_index(b.value_lo(), b.value_hi(), 16), 16);
  const StepOutcome s = refine_by_factor(f, b, factor(16));
  EXPECT_EQ(s.cost.evaluations, 1U);
  ASSERT_EQ(s.kind, OutcomeKind::Success);
  EXPECT_EQ(s.bracket->lo(), Q(15, 8));
  EXPECT_EQ(s.bracket->hi(), 2);

  // kappa = N - 1 with f(x) on the lo side: x + w = hi is cached
  const Polynomial g = P("x - 61/64");
  const Bracket c = Bracket::around(g, 0, 1);
  ASSERT_EQ(predict_index(c.value_lo(), c.value_hi(), 16), 15);
  const StepOutcome t = refine_by_factor(g, c, factor(16));
  ASSERT_EQ(t.kind, OutcomeKind::Success);
  EXPECT_EQ(t.cost.evaluations, 1U);
  EXPECT_EQ(t.bracket->lo(), Q(15, 16));
  EXPECT_EQ(t.bracket->hi(), 1);
}

TEST(RefineByFactor, RejectsSmallFactor) {
  const Polynomial f = P("x^2-2");
  EXPECT_THROW(refine_by_factor(f, Bracket::around(f, 1, 2), factor(4)), std::invalid_argument);
}

TEST(RefineByFour, Examples) {
  const Polynomial f = P("x^2-2");
  StepOutcome s = refine_by_four(f, Bracket::around(f, 1, 2));
  ASSERT_EQ(s.kind, OutcomeKind::Success);
  EXPECT_EQ(s.bracket->lo(), Q(5, 4));
  EXPECT_EQ(s.bracket->hi(), Q(3, 2));
  EXPECT_EQ(s.cost.evaluations, 2U);

  s = refine_by_four(P("2*x-1"), Bracket::around(P("2*x-1"), 0, 1));
  ASSERT_EQ(s.kind, OutcomeKind::ExactRoot);
  EXPECT_EQ(*s.root, Q(1, 2));

  // kappa = 2 names x = 1, the left end of the resulting quarter (1, 3/2)
  s = refine_by_four(f, Bracket::around(f, 0, 2));
  ASSERT_EQ(s.kind, OutcomeKind::Success);
  EXPECT_EQ(s.bracket->lo(), 1);
  EXPECT_EQ(s.bracket->hi(), Q(3, 2));
}

TEST(RefineByFour, BadGuessStillNarrows) {
  // f(0) = -1, f(1) = 10^6: kappa = 0, but the root is near 0.99
  const Polynomial f = P("10^8*x^200 - 1");
  const StepOutcome s = refine_by_four(f, Bracket::around(f, 0, 1));
  ASSERT_EQ(s.kind, OutcomeKind::FailureButNarrowed);
  EXPECT_EQ(s.bracket->lo(), Q(3, 4));
  EXPECT_EQ(s.bracket->hi(), 1);
}

TEST(RefineInterval, FifthRootOfTwo) {
  const Polynomial f = P("x^5-2");
  const Bracket start = Bracket::around(f, 1, 2);
  const RefineReport rep = refine_interval(f, start, pow2(-32));
  EXPECT_LE(rep.iterations(), 6U);
  EXPECT_LE(rep.max_digits(), 50U);
  EXPECT_EQ(check::check_result(f, start, rep, pow2(-32)), "");
  EXPECT_EQ(check::check_trace(rep.trace, 1), "");
}

TEST(RefineInterval, ExactRoot) {
  const Polynomial f = P("2*x-1");
  const RefineReport rep = refine_interval(f, Bracket::around(f, 0, 1), Q(1, 100));
  ASSERT_TRUE(rep.is_exact_root());
  EXPECT_EQ(std::get<ExactRoot>(rep.result).value, Q(1, 2));
  EXPECT_EQ(rep.trace.back().outcome, OutcomeKind::ExactRoot);
}

TEST(RefineInterval, GoldenTraceSqrt2) {
  const Polynomial f = P("x^2-2");
  const RefineReport rep = refine_interval(f, Bracket::around(f, 1, 2), Q(1, 100));
  ASSERT_EQ(rep.trace.size(), 3U);
  const OutcomeKind S = OutcomeKind::Success;
  const std::vector<std::tuple<unsigned long, OutcomeKind, Rational, unsigned>> golden = {
      {4, S, Q(1, 4), 2}, {16, S, Q(1, 64), 2}, {256, S, Q(1, 16384), 2}};
  for (std::size_t i = 0; i < golden.size(); ++i) {
    EXPECT_EQ(rep.trace[i].factor, std::get<0>(golden[i]));
    EXPECT_EQ(rep.trace[i].outcome, std::get<1>(golden[i]));
    EXPECT_EQ(rep.trace[i].width_after, std::get<2>(golden[i]));
    EXPECT_EQ(rep.trace[i].evaluations, std::get<3>(golden[i]));
  }
  const Bracket& b = std::get<Bracket>(rep.result);
  EXPECT_EQ(b.lo(), Q(11585, 8192));
  EXPECT_EQ(b.hi(), Q(23171, 16384));
  // 11585^2 < 2 * 8192^2 and 23171^2 > 2 * 16384^2
  EXPECT_LT(Integer(11585) * 11585, Integer(2) * 8192 * 8192);
  EXPECT_GT(Integer(23171) * 23171, Integer(2) * 16384 * 16384);
}

TEST(RefineInterval, ClampFinalSqrt2) {
  const Polynomial f = P("x^2-2");
  const RefineReport rep = refine_interval(f, Bracket::around(f, 1, 2), Q(1, 100), {.clamp_final = true});
  const Bracket& b = std::get<Bracket>(rep.result);
  EXPECT_EQ(b.lo(), Q(181, 128));
  EXPECT_EQ(b.hi(), Q(363, 256));
  EXPECT_EQ(width(b), Q(1, 256));
  EXPECT_LT(Integer(181) * 181, Integer(2) * 128 * 128);
  EXPECT_GT(Integer(363) * 363, Integer(2) * 256 * 256);
  ASSERT_EQ(rep.trace.size(), 3U);
  EXPECT_TRUE(rep.trace[2].clamped);
  EXPECT_EQ(rep.trace[2].factor, 4);
}

TEST(RefineInterval, ClampToGenericFactor) {
  // after (5/4, 3/2) the next step would use N = 16 but 1/4 / 2^-7 = 32 > 16,
  // so no clamp; after (45/32, 91/64) N = 256 > 1/64 / 2^-10 = 16 -> clamp to 16
  const Polynomial f = P("x^2-2");
  const RefineReport rep = refine_interval(f, Bracket::around(f, 1, 2), pow2(-10), {.clamp_final = true});
  ASSERT_EQ(rep.trace.size(), 3U);
  EXPECT_TRUE(rep.trace[2].clamped);
  EXPECT_EQ(rep.trace[2].factor, 16);
  EXPECT_EQ(rep.trace[2].width_after, pow2(-10));
}

TEST(RefineInterval, Errors) {
  const Polynomial f = P("x^2-2");
  const Bracket b = Bracket::around(f, 1, 2);
  EXPECT_THROW(refine_interval(f, b, 0), ZeroWidthTolerance);
  EXPECT_THROW(refine_interval(f, b, -1), ZeroWidthTolerance);
  // bracket built for a different polynomial
  EXPECT_THROW(refine_interval(P("x^2-5"), b, Q(1, 10)), InvalidBracket);
}

TEST(RefineInterval, AlreadyNarrow) {
  const Polynomial f = P("x^2-2");
  const RefineReport rep = refine_interval(f, Bracket::around(f, 1, 2), 1);
  EXPECT_TRUE(rep.trace.empty());
  EXPECT_EQ(std::get<Bracket>(rep.result), Bracket::around(f, 1, 2));
}

TEST(RefineInterval, TraceInvariantsOnFixtures) {
  struct Case {
    const char* poly;
    long lo, hi;
    Rational eps;
  };
  const std::vector<Case> cases = {{"x^2-2", 1, 2, pow10(-500)},
                                   {"x^5-2", 1, 2, pow10(-500)},
                                   {"x^3-x+7/10", -2, 0, pow10(-300)},
                                   {"10^200*x^2-1", 0, 2, pow10(-1000)},
                                   {"x^3-3", 0, 4, pow10(-200)}};
  for (const auto& c : cases) {
    for (bool clamp : {false, true}) {
      const Polynomial f = P(c.poly);
      const Bracket start = Bracket::around(f, c.lo, c.hi);
      const RefineOptions opts{.clamp_final = clamp};
      const RefineReport rep = refine_interval(f, start, c.eps, opts);
      EXPECT_EQ(check::check_trace(rep.trace, width(start)), "") << c.poly;
      EXPECT_EQ(check::check_result(f, start, rep, c.eps), "") << c.poly;
      EXPECT_EQ(check::replay(f, start, c.eps, opts, rep), "") << c.poly;
    }
  }
}

TEST(RefineInterval, EventualQuadraticConvergence) {
  // Regression values: iteration of the last failure and the width in effect
  // there. Every later step must be a success.
  struct Case {
    const char* poly;
    long lo, hi;
    std::size_t last_failure;
  };
  const std::vector<Case> cases = {{"x^2-2", 1, 2, 0}, {"x^5-2", 1, 2, 2}, {"10^200*x^2-1", 0, 2, 30}};
  for (const auto& c : cases) {
    const Polynomial f = P(c.poly);
    const RefineReport rep = refine_interval(f, Bracket::around(f, c.lo, c.hi), pow10(-3000));
    std::size_t last_failure = 0;
    for (const auto& r : rep.trace)
      if (r.outcome != OutcomeKind::Success) last_failure = r.iteration;
    EXPECT_EQ(last_failure, c.last_failure) << c.poly;
    EXPECT_GE(rep.trace.size() - last_failure, 5U) << c.poly;
  }
}

TEST(RefineInterval, EventualQuadraticConvergenceRandomCubics) {
  // cubics with roots near well separated integers; once the width is below
  // 2^-20 no failure is expected (threshold measured on this seed)
  const Rational threshold = pow2(-20);
  std::mt19937_64 rng(32);
  int runs = 0;
  while (runs < 40) {
    const long a = check::uniform(rng, -20, 20);
    const long b = a + check::uniform(rng, 3, 10);
    const long c = b + check::uniform(rng, 3, 10);
    const Polynomial f = Polynomial{Rational(-a), 1} * Polynomial{Rational(-b), 1} * Polynomial{Rational(-c), 1} +
                         Polynomial::constant(make_rational(check::uniform(rng, -9, 9), 7));
    const long root = std::vector<long>{a, b, c}[static_cast<std::size_t>(check::uniform(rng, 0, 2))];
    const Rational lo = Rational(root) - Q(1, 2);
    const Rational hi = Rational(root) + Q(1, 2);
    if (sign_at(f, lo) * sign_at(f, hi) != Sign::Negative) continue;
    ++runs;
    const RefineReport rep = refine_interval(f, Bracket::around(f, lo, hi), pow10(-400));
    Rational w = 1;
    for (const auto& r : rep.trace) {
      if (w < threshold) EXPECT_NE(r.outcome, OutcomeKind::Failure) << f << " iteration " << r.iteration;
      w = r.width_after;
    }
  }
}

TEST(RefineInterval, ApproxPredictStaysSound) {
  for (const char* poly : {"x^2-2", "x^5-2", "10^200*x^2-1"}) {
    const Polynomial f = P(poly);
    const Bracket start = Bracket::around(f, 0, 2);
    const RefineOptions opts{.approx_predict = true};
    const RefineReport rep = refine_interval(f, start, pow10(-300), opts);
    EXPECT_EQ(check::check_trace(rep.trace, 2), "") << poly;
    EXPECT_EQ(check::check_result(f, start, rep, pow10(-300)), "") << poly;
    EXPECT_EQ(check::replay(f, start, pow10(-300), opts, rep), "") << poly;
  }
}

TEST(PredictIndexApprox, WithinOneOfExact) {
  std::mt19937_64 rng(33);
  for (int i = 0; i < 200; ++i) {
    Polynomial f;
    Bracket b = Bracket::around(P("x"), -1, 1);
    if (!check::random_bracketed(rng, 5, 20, f, b)) {
      --i;
      continue;
    }
    const RefinementFactor n = factor_pow2(2UL << check::uniform(rng, 0, 7));
    const Integer exact = predict_index(b.value_lo(), b.value_hi(), n.value());
    const Integer approx = predict_index_approx(f, b, n);
    EXPECT_LE(abs(Integer(exact - approx)), 1);
  }
}
