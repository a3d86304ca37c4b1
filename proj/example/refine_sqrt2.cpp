// Refines sqrt(2) to 100 decimal places and prints the trace.
#include "qir/qir.hpp"

#include <iostream>

int main() {
  using namespace qir;
  const Polynomial f = parse_polynomial("x^2 - 2");
  const Bracket start = Bracket::around(f, Rational(1), Rational(2));
  const RefineReport rep = refine_interval(f, start, pow10(-100));

  for (const auto& r : rep.trace)
    std::cout << r.iteration << "  N=" << r.factor << "  " << to_string(r.outcome) << "  width digits "
              << decimal_digit_count(r.width_after).denominator_digits << "\n";

  const auto& b = std::get<Bracket>(rep.result);
  std::cout << "lo = " << b.lo() << "\nhi = " << b.hi() << "\n";
  std::cout << rep.evaluations() << " evaluations of f\n";
}
