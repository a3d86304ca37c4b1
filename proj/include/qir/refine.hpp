/**
 * @file refine.hpp
 * @brief Quadratic Interval Refinement.
 *
 * A narrowing step splits the current bracket into N equal sub-intervals,
 * guesses by linear interpolation which grid point is closest to the root,
 * and tests the sub-interval next to that point. The refinement factor N is
 * squared after a success and square-rooted after a failure (never below 4).
 * N = 4 is special: two bisections always narrow the bracket, and the step
 * only reports whether the interpolation guess agreed.
 */
#pragma once

#include "qir/approx.hpp"
#include "qir/numerics.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace qir {

class InvalidBracket : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ZeroWidthTolerance : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Open interval (lo, hi) with f(lo) and f(hi) of opposite, nonzero sign.
/// The exact endpoint values are cached so that interpolation never
/// re-evaluates f at an endpoint.
class Bracket {
 public:
  /// Throws InvalidBracket unless lo < hi and the values have opposite signs.
  Bracket(Rational lo, Rational hi, Rational value_lo, Rational value_hi)
      : lo_(std::move(lo)), hi_(std::move(hi)), value_lo_(std::move(value_lo)), value_hi_(std::move(value_hi)) {
    if (!(lo_ < hi_)) throw InvalidBracket("bracket endpoints must satisfy lo < hi");
    if (sign_lo() * sign_hi() != Sign::Negative)
      throw InvalidBracket("endpoint signs not opposite (f(lo) = " + to_string(value_lo_) +
                           ", f(hi) = " + to_string(value_hi_) + ")");
  }

  /// Evaluates f at both endpoints.
  static Bracket around(const Polynomial& f, const Rational& lo, const Rational& hi) {
    return {lo, hi, eval_exact(f, lo), eval_exact(f, hi)};
  }

  [[nodiscard]] const Rational& lo() const { return lo_; }
  [[nodiscard]] const Rational& hi() const { return hi_; }
  [[nodiscard]] const Rational& value_lo() const { return value_lo_; }
  [[nodiscard]] const Rational& value_hi() const { return value_hi_; }
  [[nodiscard]] Sign sign_lo() const { return sign_of(value_lo_); }
  [[nodiscard]] Sign sign_hi() const { return sign_of(value_hi_); }

  [[nodiscard]] bool contains(const Rational& x) const { return lo_ < x && x < hi_; }

  friend bool operator==(const Bracket& a, const Bracket& b) { return a.lo_ == b.lo_ && a.hi_ == b.hi_; }

 private:
  Rational lo_;
  Rational hi_;
  Rational value_lo_;
  Rational value_hi_;
};

inline Rational width(const Bracket& b) { return b.hi() - b.lo(); }

/// Refinement factor N. The schedule only visits 4^(2^m); a clamped final
/// step may use any integer >= 4.
class RefinementFactor {
 public:
  explicit RefinementFactor(Integer value) : value_(std::move(value)) {
    if (value_ < 4) throw std::invalid_argument("refinement factor must be at least 4");
  }

  static RefinementFactor four() { return RefinementFactor(Integer(4)); }

  [[nodiscard]] const Integer& value() const { return value_; }
  [[nodiscard]] bool is_four() const { return value_ == 4; }

  [[nodiscard]] RefinementFactor squared() const { return RefinementFactor(value_ * value_); }

  /// Floor of the square root; exact on the schedule.
  [[nodiscard]] RefinementFactor square_root() const {
    Integer r;
    mpz_sqrt(r.get_mpz_t(), value_.get_mpz_t());
    return RefinementFactor(r);
  }

  /// ceil(log2 N)
  [[nodiscard]] long log2_ceil() const {
    const long len = static_cast<long>(mpz_sizeinbase(value_.get_mpz_t(), 2));
    return mpz_popcount(value_.get_mpz_t()) == 1 ? len - 1 : len;
  }

  /// True when N = 4^(2^m) for some m >= 0.
  [[nodiscard]] bool on_schedule() const {
    if (mpz_popcount(value_.get_mpz_t()) != 1) return false;
    const unsigned long log2n = mpz_sizeinbase(value_.get_mpz_t(), 2) - 1;
    // log2 N = 2^(m+1)
    return log2n >= 2 && (log2n & (log2n - 1)) == 0;
  }

  friend bool operator==(const RefinementFactor&, const RefinementFactor&) = default;

 private:
  Integer value_;
};

enum class OutcomeKind { Success, Failure, FailureButNarrowed, ExactRoot };

inline const char* to_string(OutcomeKind k) {
  switch (k) {
    case OutcomeKind::Success: return "success";
    case OutcomeKind::Failure: return "failure";
    case OutcomeKind::FailureButNarrowed: return "failure_narrowed";
    case OutcomeKind::ExactRoot: return "exact_root";
  }
  return "?";
}

/// Work done by one step: fresh evaluations of f, and the largest decimal
/// digit count over every rational the step produced or consumed.
struct StepCost {
  unsigned evaluations = 0;
  std::size_t max_digits = 0;

  void note(const Rational& q) { max_digits = std::max(max_digits, decimal_digit_count(q).max()); }
};

struct StepOutcome {
  OutcomeKind kind = OutcomeKind::Failure;
  std::optional<Bracket> bracket;  ///< Success and FailureButNarrowed
  std::optional<Rational> root;    ///< ExactRoot
  StepCost cost;
};

struct ExactRoot {
  Rational value;
  friend bool operator==(const ExactRoot&, const ExactRoot&) = default;
};

using RefineResult = std::variant<Bracket, ExactRoot>;

struct TraceRecord {
  std::size_t iteration = 0;  ///< 1-based
  Integer factor;             ///< N used by this step
  bool clamped = false;       ///< N was reduced for the final step
  OutcomeKind outcome = OutcomeKind::Failure;
  Rational width_after;
  unsigned evaluations = 0;
  std::size_t max_digits = 0;

  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

struct RefineOptions {
  /// Reduce N on the step that would otherwise overshoot eps.
  bool clamp_final = false;
  /// Predict the grid index from (log2 N + 2)-bit approximations of the
  /// endpoint values instead of the exact ones. Sign tests stay exact.
  bool approx_predict = false;
};

struct RefineReport {
  RefineResult result;
  std::vector<TraceRecord> trace;

  [[nodiscard]] bool is_exact_root() const { return std::holds_alternative<ExactRoot>(result); }
  [[nodiscard]] std::size_t iterations() const { return trace.size(); }
  [[nodiscard]] unsigned evaluations() const {
    unsigned n = 0;
    for (const auto& r : trace) n += r.evaluations;
    return n;
  }
  [[nodiscard]] std::size_t max_digits() const {
    std::size_t d = 0;
    for (const auto& r : trace) d = std::max(d, r.max_digits);
    return d;
  }
};

// ---------------------------------------------------------------------------
// Prediction

/// round(N * f_lo / (f_lo - f_hi)), in [0, N] for values of opposite sign.
inline Integer predict_index(const Rational& f_lo, const Rational& f_hi, const Integer& n) {
  return round_nearest(Rational(n) * f_lo / (f_lo - f_hi));
}

/// Same prediction from approximate endpoint values carrying log2(N)+2 bits.
/// An ambiguous approximation falls back to the cached exact value.
inline Integer predict_index_approx(const Polynomial& f, const Bracket& b, const RefinementFactor& n) {
  const long bits = n.log2_ceil() + 2;
  auto approx_or_exact = [&](const Rational& x, const Rational& exact) {
    auto a = eval_approx(f, x, bits);
    return a ? a->value() : exact;
  };
  const Rational a_lo = approx_or_exact(b.lo(), b.value_lo());
  const Rational a_hi = approx_or_exact(b.hi(), b.value_hi());
  Integer k = predict_index(a_lo, a_hi, n.value());
  if (k < 0) k = 0;
  if (k > n.value()) k = n.value();
  return k;
}

namespace detail {

class Evaluator {
 public:
  Evaluator(const Polynomial& f, StepCost& cost) : f_(f), cost_(cost) {}

  Rational operator()(const Rational& x) {
    ++cost_.evaluations;
    Rational v = eval_exact(f_, x);
    cost_.note(x);
    cost_.note(v);
    return v;
  }

 private:
  const Polynomial& f_;
  StepCost& cost_;
};

inline Integer predict(const Polynomial& f, const Bracket& b, const RefinementFactor& n, bool approx) {
  return approx ? predict_index_approx(f, b, n) : predict_index(b.value_lo(), b.value_hi(), n.value());
}

inline StepOutcome exact_root(Rational x, StepCost cost) {
  StepOutcome out;
  out.kind = OutcomeKind::ExactRoot;
  out.root = std::move(x);
  out.cost = cost;
  return out;
}

inline StepOutcome narrowed(OutcomeKind kind, Bracket b, StepCost cost) {
  cost.note(b.lo());
  cost.note(b.hi());
  cost.note(width(b));
  StepOutcome out;
  out.kind = kind;
  out.bracket = std::move(b);
  out.cost = cost;
  return out;
}

}  // namespace detail

/// One narrowing step with N > 4. At most two fresh evaluations of f; grid
/// points that coincide with an endpoint reuse the cached value.
inline StepOutcome refine_by_factor(const Polynomial& f, const Bracket& b, const RefinementFactor& n,
                                    bool approx_predict = false) {
  if (n.value() <= 4) throw std::invalid_argument("refine_by_factor requires N > 4");
  StepCost cost;
  detail::Evaluator eval(f, cost);
  const Integer& N = n.value();
  const Rational w = width(b) / N;
  const Integer k = detail::predict(f, b, n, approx_predict);

  auto grid = [&](const Integer& i) -> Rational { return b.lo() + w * i; };
  auto value_at = [&](const Integer& i, const Rational& x) -> Rational {
    if (i == 0) return b.value_lo();
    if (i == N) return b.value_hi();
    return eval(x);
  };

  const Rational x_hat = grid(k);
  const Rational f_hat = value_at(k, x_hat);
  if (f_hat == 0) return detail::exact_root(x_hat, cost);

  if (sign_of(f_hat) == b.sign_lo()) {
    // root lies to the right of x_hat, if the guess was good
    const Integer j = k + 1;
    const Rational x_next = grid(j);
    const Rational f_next = value_at(j, x_next);
    if (f_next == 0) return detail::exact_root(x_next, cost);
    if (sign_of(f_next) == sign_of(f_hat)) {
      StepOutcome out;
      out.kind = OutcomeKind::Failure;
      out.cost = cost;
      return out;
    }
    return detail::narrowed(OutcomeKind::Success, Bracket(x_hat, x_next, f_hat, f_next), cost);
  }
  const Integer j = k - 1;
  const Rational x_prev = grid(j);
  const Rational f_prev = value_at(j, x_prev);
  if (f_prev == 0) return detail::exact_root(x_prev, cost);
  if (sign_of(f_prev) == sign_of(f_hat)) {
    StepOutcome out;
    out.kind = OutcomeKind::Failure;
    out.cost = cost;
    return out;
  }
  return detail::narrowed(OutcomeKind::Success, Bracket(x_prev, x_hat, f_prev, f_hat), cost);
}

/// The N = 4 step: predict one of the five quarter points, then bisect twice.
/// The bracket always shrinks by 4; Success iff the prediction is an endpoint
/// of the resulting quarter.
inline StepOutcome refine_by_four(const Polynomial& f, const Bracket& b, bool approx_predict = false) {
  StepCost cost;
  detail::Evaluator eval(f, cost);
  const Integer k = detail::predict(f, b, RefinementFactor::four(), approx_predict);

  Rational lo = b.lo(), hi = b.hi(), f_lo = b.value_lo(), f_hi = b.value_hi();
  unsigned j = 0;  // index of the quarter point at lo
  for (unsigned step = 0; step < 2; ++step) {
    Rational mid = (lo + hi) / 2;
    Rational f_mid = eval(mid);
    if (f_mid == 0) return detail::exact_root(mid, cost);
    const unsigned half = step == 0 ? 2U : 1U;
    if (sign_of(f_mid) == sign_of(f_lo)) {
      lo = std::move(mid);
      f_lo = std::move(f_mid);
      j += half;
    } else {
      hi = std::move(mid);
      f_hi = std::move(f_mid);
    }
  }
  const bool hit = (k == j || k == j + 1);
  return detail::narrowed(hit ? OutcomeKind::Success : OutcomeKind::FailureButNarrowed,
                          Bracket(lo, hi, f_lo, f_hi), cost);
}

/// Refines b until its width is at most eps, or an exact root turns up.
///
/// Throws ZeroWidthTolerance if eps <= 0, and InvalidBracket if the cached
/// endpoint values of b disagree in sign with f.
inline RefineReport refine_interval(const Polynomial& f, Bracket b, const Rational& eps,
                                    const RefineOptions& opts = {}) {
  if (eps <= 0) throw ZeroWidthTolerance("tolerance must be positive");
  if (sign_at(f, b.lo()) != b.sign_lo() || sign_at(f, b.hi()) != b.sign_hi())
    throw InvalidBracket("bracket values do not match the polynomial");

  RefineReport report{b, {}};
  RefinementFactor n = RefinementFactor::four();
  std::size_t iteration = 0;
  std::size_t initial_digits = 0;
  for (const Rational* q : {&b.lo(), &b.hi(), &b.value_lo(), &b.value_hi()})
    initial_digits = std::max(initial_digits, decimal_digit_count(*q).max());

  while (width(b) > eps) {
    ++iteration;
    RefinementFactor step_n = n;
    bool clamped = false;
    if (opts.clamp_final) {
      Integer needed = ceil(width(b) / eps);
      if (needed < 4) needed = 4;
      if (needed < n.value()) {
        step_n = RefinementFactor(needed);
        clamped = true;
      }
    }

    StepOutcome out = step_n.is_four() ? refine_by_four(f, b, opts.approx_predict)
                                       : refine_by_factor(f, b, step_n, opts.approx_predict);
    if (iteration == 1) out.cost.max_digits = std::max(out.cost.max_digits, initial_digits);
    if (out.bracket) b = *out.bracket;

    TraceRecord rec;
    rec.iteration = iteration;
    rec.factor = step_n.value();
    rec.clamped = clamped;
    rec.outcome = out.kind;
    rec.width_after = out.root ? Rational(0) : width(b);
    rec.evaluations = out.cost.evaluations;
    rec.max_digits = out.cost.max_digits;
    report.trace.push_back(std::move(rec));

    switch (out.kind) {
      case OutcomeKind::ExactRoot:
        report.result = ExactRoot{*out.root};
        return report;
      case OutcomeKind::Success:
        if (!clamped) n = n.squared();
        break;
      case OutcomeKind::Failure:
        if (!n.is_four()) n = n.square_root();
        break;
      case OutcomeKind::FailureButNarrowed:
        break;
    }
  }
  report.result = b;
  return report;
}

}  // namespace qir
