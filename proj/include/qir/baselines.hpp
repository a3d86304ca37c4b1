/**
 * @file baselines.hpp
 * @brief Classical refinement methods over exact rationals: Bisection,
 * Regula Falsi and Newton's iteration.
 *
 * These exist for comparison with QIR. Newton is instrumented with the
 * decimal size of every iterate, since denominator growth is its main
 * weakness under exact arithmetic.
 */
#pragma once

#include "qir/refine.hpp"

#include <optional>
#include <stdexcept>
#include <vector>

namespace qir {

class DegenerateStep : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Halves b at its midpoint. Exactly one evaluation.
inline StepOutcome bisect_step(const Polynomial& f, const Bracket& b) {
  StepCost cost;
  detail::Evaluator eval(f, cost);
  Rational mid = (b.lo() + b.hi()) / 2;
  Rational f_mid = eval(mid);
  if (f_mid == 0) return detail::exact_root(std::move(mid), cost);
  if (sign_of(f_mid) == b.sign_lo())
    return detail::narrowed(OutcomeKind::Success, Bracket(mid, b.hi(), f_mid, b.value_hi()), cost);
  return detail::narrowed(OutcomeKind::Success, Bracket(b.lo(), mid, b.value_lo(), f_mid), cost);
}

/// Moves one endpoint to the secant estimate lo + (hi-lo) f(lo)/(f(lo)-f(hi)).
inline StepOutcome regula_falsi_step(const Polynomial& f, const Bracket& b) {
  StepCost cost;
  detail::Evaluator eval(f, cost);
  Rational x = b.lo() + width(b) * b.value_lo() / (b.value_lo() - b.value_hi());
  if (x <= b.lo() || x >= b.hi()) throw DegenerateStep("regula falsi estimate is not interior");
  Rational fx = eval(x);
  if (fx == 0) return detail::exact_root(std::move(x), cost);
  if (sign_of(fx) == b.sign_lo())
    return detail::narrowed(OutcomeKind::Success, Bracket(x, b.hi(), fx, b.value_hi()), cost);
  return detail::narrowed(OutcomeKind::Success, Bracket(b.lo(), x, b.value_lo(), fx), cost);
}

/// Stop when |x_n - reference_root| <= error_bound.
struct NewtonTarget {
  Rational reference_root;
  Rational error_bound;
};

struct NewtonOptions {
  std::size_t max_iters = 100;
  std::optional<NewtonTarget> target;
  /// Iterates whose reduced denominator exceeds this many decimal digits end
  /// the run as non-converged. Without it a diverging run on a cubic would
  /// triple its size every step.
  std::size_t max_denominator_digits = 1'000'000;
};

enum class NewtonStop { TargetReached, IterationLimit, DerivativeZero, SizeLimit };

inline const char* to_string(NewtonStop s) {
  switch (s) {
    case NewtonStop::TargetReached: return "target_reached";
    case NewtonStop::IterationLimit: return "iteration_limit";
    case NewtonStop::DerivativeZero: return "derivative_zero";
    case NewtonStop::SizeLimit: return "size_limit";
  }
  return "?";
}

struct NewtonReport {
  std::vector<Rational> iterates;  ///< iterates[0] is x0
  bool converged = false;
  std::size_t iterations_used = 0;
  std::vector<DigitCount> digit_counts;  ///< parallel to iterates
  NewtonStop stop = NewtonStop::IterationLimit;
};

/// x_{n} = x_{n-1} - f(x_{n-1}) / f'(x_{n-1}) in exact arithmetic.
///
/// With x = a/b the update is computed from homogeneous integer forms, so each
/// iterate costs one reduction. Without a target the run always goes to
/// max_iters and converged stays false.
inline NewtonReport newton_iterate(const Polynomial& f, const Rational& x0, const NewtonOptions& opts = {}) {
  if (f.degree() < 1) throw std::invalid_argument("newton_iterate: f must be nonconstant");
  if (opts.max_iters < 1) throw std::invalid_argument("newton_iterate: max_iters must be at least 1");
  const Polynomial df = derivative(f);
  const Integer& l_f = f.common_denominator();
  const Integer& l_df = df.common_denominator();

  NewtonReport rep;
  auto push = [&](Rational x) {
    rep.digit_counts.push_back(decimal_digit_count(x));
    rep.iterates.push_back(std::move(x));
  };
  auto on_target = [&](const Rational& x) {
    return opts.target && abs(x - opts.target->reference_root) <= opts.target->error_bound;
  };

  push(x0);
  if (on_target(x0)) {
    rep.converged = true;
    rep.stop = NewtonStop::TargetReached;
    return rep;
  }
  for (std::size_t it = 0; it < opts.max_iters; ++it) {
    const Rational& x = rep.iterates.back();
    const Integer& a = x.get_num();
    const Integer& b = x.get_den();
    // f(x) = P / (l_f b^n),  f'(x) = Q / (l_df b^(n-1))
    const Integer p = eval_homogeneous(f, a, b);
    const Integer q = eval_homogeneous(df, a, b);
    if (q == 0) {
      rep.stop = NewtonStop::DerivativeZero;
      return rep;
    }
    const Integer lq = l_f * q;
    Rational next = make_rational(a * lq - p * l_df, b * lq);
    ++rep.iterations_used;
    const std::size_t approx_digits = mpz_sizeinbase(next.get_den_mpz_t(), 10);
    const bool too_big = approx_digits > opts.max_denominator_digits + 1 ||
                         (approx_digits > opts.max_denominator_digits &&
                          decimal_digits(next.get_den()) > opts.max_denominator_digits);
    push(std::move(next));
    if (too_big) {
      rep.stop = NewtonStop::SizeLimit;
      return rep;
    }
    if (on_target(rep.iterates.back())) {
      rep.converged = true;
      rep.stop = NewtonStop::TargetReached;
      return rep;
    }
  }
  rep.stop = NewtonStop::IterationLimit;
  return rep;
}

}  // namespace qir
