// Command-line front end: refine, isolate, solve and bench.
//
// Exit codes: 0 success, 2 parse or input error, 3 invalid bracket,
// 4 bench expectation failure, 5 isolator recursion limit.
#pragma once

#include "qir/qir.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace qir::cli {

enum ExitCode : int {
  kOk = 0,
  kParseError = 2,
  kInvalidBracket = 3,
  kBenchFailure = 4,
  kRecursionTooDeep = 5,
};

struct CommonArgs {
  std::string poly;
  std::string eps;
  std::string method = "qir";
  std::string trace_path;
  bool clamp_final = false;
  bool approx_predict = false;
  bool json = false;
};

struct RefineArgs : CommonArgs {
  std::string lo;
  std::string hi;
  std::string x0;
  std::size_t max_iter = 100;
};

struct IsolateArgs {
  std::string poly;
  std::size_t max_depth = 128;
  bool json = false;
};

struct SolveArgs : CommonArgs {
  std::size_t max_depth = 128;
};

struct BenchArgs {
  std::string suite;
  bool json = false;
};

namespace detail {

inline nlohmann::json bracket_json(const Bracket& b) {
  return {{"lo", to_string(b.lo())}, {"hi", to_string(b.hi())}, {"width", to_string(width(b))}};
}

inline std::string interval_text(const Bracket& b) {
  return "(" + to_string(b.lo()) + ", " + to_string(b.hi()) + ")";
}

inline RefineOptions options_of(const CommonArgs& a) { return {a.clamp_final, a.approx_predict}; }

inline nlohmann::json report_json(const RefineReport& rep) {
  nlohmann::json j;
  if (const auto* b = std::get_if<Bracket>(&rep.result)) {
    j["interval"] = bracket_json(*b);
  } else {
    j["exact_root"] = to_string(std::get<ExactRoot>(rep.result).value);
  }
  j["iterations"] = rep.iterations();
  j["evaluations"] = rep.evaluations();
  j["max_digits"] = rep.max_digits();
  return j;
}

inline void print_report(std::ostream& out, const RefineReport& rep) {
  if (const auto* b = std::get_if<Bracket>(&rep.result)) {
    out << "interval: " << interval_text(*b) << "\n";
    out << "width: " << to_string(width(*b)) << "\n";
  } else {
    out << "exact root: " << to_string(std::get<ExactRoot>(rep.result).value) << "\n";
  }
  out << "iterations: " << rep.iterations() << "\n";
  out << "evaluations: " << rep.evaluations() << "\n";
  out << "max digits: " << rep.max_digits() << "\n";
}

/// Bisection or one-endpoint Regula Falsi repeated until width <= eps.
inline int run_stepper(const RefineArgs& a, const Polynomial& f, Bracket b, const Rational& eps, std::ostream& out) {
  const bool bisect = a.method == "bisect";
  std::size_t steps = 0;
  unsigned evals = 0;
  std::size_t digits = 0;
  std::optional<Rational> root;
  while (width(b) > eps && steps < a.max_iter) {
    StepOutcome s = bisect ? bisect_step(f, b) : regula_falsi_step(f, b);
    ++steps;
    evals += s.cost.evaluations;
    digits = std::max(digits, s.cost.max_digits);
    if (s.root) {
      root = *s.root;
      break;
    }
    b = *s.bracket;
  }
  const bool reached = root || width(b) <= eps;
  if (a.json) {
    nlohmann::json j{{"method", a.method}, {"steps", steps}, {"evaluations", evals},
                     {"max_digits", digits}, {"converged", reached}};
    if (root)
      j["exact_root"] = to_string(*root);
    else
      j["interval"] = bracket_json(b);
    out << j.dump(2) << "\n";
  } else {
    out << "method: " << a.method << "\n";
    if (root)
      out << "exact root: " << to_string(*root) << "\n";
    else
      out << "interval: " << interval_text(b) << "\nwidth: " << to_string(width(b)) << "\n";
    out << "steps: " << steps << "\nevaluations: " << evals << "\nmax digits: " << digits << "\n";
    if (!reached) out << "tolerance not reached after " << steps << " steps\n";
  }
  return kOk;
}

inline int run_newton(const RefineArgs& a, const Polynomial& f, const Bracket& b, const Rational& eps,
                      std::ostream& out) {
  // reference root: midpoint of a QIR bracket far narrower than eps
  const Rational ref_width = std::min(Rational(eps * eps), Rational(eps / pow2(32)));
  const RefineReport ref = refine_interval(f, b, ref_width);
  Rational reference;
  if (const auto* fin = std::get_if<Bracket>(&ref.result))
    reference = (fin->lo() + fin->hi()) / 2;
  else
    reference = std::get<ExactRoot>(ref.result).value;

  NewtonOptions opts;
  opts.max_iters = a.max_iter;
  opts.target = NewtonTarget{reference, eps};
  const Rational x0 = a.x0.empty() ? b.lo() : parse_rational(a.x0);
  const NewtonReport rep = newton_iterate(f, x0, opts);

  if (a.json) {
    nlohmann::json iters = nlohmann::json::array();
    for (std::size_t i = 0; i < rep.iterates.size(); ++i)
      iters.push_back({{"iter", i},
                       {"numerator_digits", rep.digit_counts[i].numerator_digits},
                       {"denominator_digits", rep.digit_counts[i].denominator_digits}});
    out << nlohmann::json{{"method", "newton"},
                          {"x0", to_string(x0)},
                          {"converged", rep.converged},
                          {"iterations_used", rep.iterations_used},
                          {"stop", to_string(rep.stop)},
                          {"iterates", iters}}
               .dump(2)
        << "\n";
  } else {
    out << "method: newton\nx0: " << to_string(x0) << "\n";
    out << "converged: " << (rep.converged ? "yes" : "no") << " (" << to_string(rep.stop) << ")\n";
    out << "iterations: " << rep.iterations_used << "\n";
    for (std::size_t i = 0; i < rep.iterates.size(); ++i)
      out << "  x" << i << ": numerator " << rep.digit_counts[i].numerator_digits << " digits, denominator "
          << rep.digit_counts[i].denominator_digits << " digits\n";
  }
  return kOk;
}

}  // namespace detail

inline int run_refine(const RefineArgs& a, std::ostream& out, std::ostream& err) {
  const Polynomial f = parse_polynomial(a.poly);
  const Rational eps = parse_tolerance(a.eps);
  const Bracket b = Bracket::around(f, parse_rational(a.lo), parse_rational(a.hi));

  if (a.method != "qir") {
    if (!a.trace_path.empty()) {
      err << "error: --trace is only available with --method qir\n";
      return kParseError;
    }
    if (a.method == "newton") return detail::run_newton(a, f, b, eps, out);
    return detail::run_stepper(a, f, b, eps, out);
  }

  const RefineReport rep = refine_interval(f, b, eps, detail::options_of(a));
  if (!a.trace_path.empty()) {
    std::ofstream t(a.trace_path);
    if (!t) {
      err << "error: cannot write trace to " << a.trace_path << "\n";
      return kParseError;
    }
    t << trace_to_json(rep.trace).dump(2) << "\n";
  }
  if (a.json)
    out << detail::report_json(rep).dump(2) << "\n";
  else
    detail::print_report(out, rep);
  return kOk;
}

inline int run_isolate(const IsolateArgs& a, std::ostream& out, std::ostream& err) {
  const Polynomial p = parse_polynomial(a.poly);
  if (p.degree() < 1) {
    err << "error: nonconstant polynomial required\n";
    return kParseError;
  }
  const IsolationResult iso = isolate_real_roots(p, a.max_depth);
  const bool deep = iso.status == IsolationStatus::RecursionTooDeep;
  if (a.json) {
    nlohmann::json br = nlohmann::json::array();
    for (const auto& b : iso.brackets) br.push_back(detail::bracket_json(b));
    nlohmann::json roots = nlohmann::json::array();
    for (const auto& r : iso.exact_roots) roots.push_back(to_string(r));
    out << nlohmann::json{{"brackets", br},
                          {"exact_roots", roots},
                          {"status", deep ? "recursion_too_deep" : "complete"}}
               .dump(2)
        << "\n";
  } else {
    for (const auto& r : iso.exact_roots) out << "root " << to_string(r) << "\n";
    for (const auto& b : iso.brackets) out << "bracket " << detail::interval_text(b) << "\n";
    out << "status: " << (deep ? "recursion too deep" : "complete") << "\n";
  }
  if (deep) err << "error: recursion too deep (max depth " << a.max_depth << ")\n";
  return deep ? kRecursionTooDeep : kOk;
}

inline int run_solve(const SolveArgs& a, std::ostream& out, std::ostream& err) {
  const Polynomial p = parse_polynomial(a.poly);
  if (p.degree() < 1) {
    err << "error: nonconstant polynomial required\n";
    return kParseError;
  }
  const Rational eps = parse_tolerance(a.eps);
  const IsolationResult iso = isolate_real_roots(p, a.max_depth);
  const bool deep = iso.status == IsolationStatus::RecursionTooDeep;

  std::vector<RefineReport> reports;
  for (const auto& b : iso.brackets) reports.push_back(refine_interval(iso.square_free, b, eps, detail::options_of(a)));

  if (a.json) {
    nlohmann::json roots = nlohmann::json::array();
    for (const auto& r : iso.exact_roots) roots.push_back({{"exact_root", to_string(r)}});
    for (const auto& rep : reports) roots.push_back(detail::report_json(rep));
    out << nlohmann::json{{"root_count", iso.root_count()},
                          {"roots", roots},
                          {"status", deep ? "recursion_too_deep" : "complete"}}
               .dump(2)
        << "\n";
  } else {
    out << "roots: " << iso.root_count() << "\n";
    for (const auto& r : iso.exact_roots) out << "exact root: " << to_string(r) << "\n";
    for (const auto& rep : reports) {
      if (const auto* b = std::get_if<Bracket>(&rep.result))
        out << "interval: " << detail::interval_text(*b) << "  [" << rep.iterations() << " iterations]\n";
      else
        out << "exact root: " << to_string(std::get<ExactRoot>(rep.result).value) << "\n";
    }
  }
  if (deep) err << "error: recursion too deep (max depth " << a.max_depth << "); results are partial\n";
  return deep ? kRecursionTooDeep : kOk;
}

inline int run_bench(const BenchArgs& a, std::ostream& out, std::ostream& err) {
  std::ifstream in(a.suite);
  if (!in) {
    err << "error: cannot open suite " << a.suite << "\n";
    return kParseError;
  }
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kParseError;
  }
  const auto suite = bench::suite_from_json(j);
  const auto results = bench::run_suite(suite);
  bool ok = true;
  if (a.json) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : results) arr.push_back(bench::to_json(r));
    out << arr.dump(2) << "\n";
  } else {
    out << bench::csv_header() << "\n";
    for (const auto& r : results) out << bench::to_csv(r) << "\n";
  }
  for (const auto& r : results) {
    ok = ok && r.passed;
    for (const auto& f : r.failures) err << r.name << " (eps " << r.epsilon << "): " << f << "\n";
  }
  return ok ? kOk : kBenchFailure;
}

/// Parses args (args[0] is the program name) and dispatches.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact real root refinement with Quadratic Interval Refinement"};
  app.require_subcommand(1);

  auto add_common = [](CLI::App* sub, CommonArgs& c) {
    sub->add_option("--poly", c.poly, "polynomial in x, e.g. \"10^200*x^2-1\"")->required();
    sub->add_option("--eps", c.eps, "width tolerance, e.g. 2^-32, 10^-100, 1/4")->required();
    sub->add_option("--method", c.method, "refinement method")
        ->check(CLI::IsMember({"qir", "bisect", "regula", "newton"}));
    sub->add_option("--trace", c.trace_path, "write the QIR trace as JSON");
    sub->add_flag("--clamp-final", c.clamp_final, "reduce N on the final step to avoid overshoot");
    sub->add_flag("--approx-predict", c.approx_predict, "predict from log2(N)+2 bit approximations");
    sub->add_flag("--json", c.json, "JSON output");
  };

  RefineArgs refine;
  auto* refine_cmd = app.add_subcommand("refine", "refine one isolating interval");
  add_common(refine_cmd, refine);
  refine_cmd->add_option("--lo", refine.lo, "left endpoint")->required();
  refine_cmd->add_option("--hi", refine.hi, "right endpoint")->required();
  refine_cmd->add_option("--x0", refine.x0, "Newton starting value (default: --lo)");
  refine_cmd->add_option("--max-iter", refine.max_iter, "iteration cap for the baseline methods");

  IsolateArgs isolate;
  auto* isolate_cmd = app.add_subcommand("isolate", "isolate the real roots");
  isolate_cmd->add_option("--poly", isolate.poly, "polynomial in x")->required();
  isolate_cmd->add_option("--max-depth", isolate.max_depth, "bisection depth limit");
  isolate_cmd->add_flag("--json", isolate.json, "JSON output");

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "isolate, then refine every root with QIR");
  add_common(solve_cmd, solve);
  solve_cmd->add_option("--max-depth", solve.max_depth, "bisection depth limit");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "run a benchmark suite file");
  bench_cmd->add_option("--suite", bench.suite, "suite JSON file")->required();
  bench_cmd->add_flag("--json", bench.json, "JSON report instead of CSV");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& s : args) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kParseError;
  }

  try {
    if (*refine_cmd) return run_refine(refine, out, err);
    if (*isolate_cmd) return run_isolate(isolate, out, err);
    if (*solve_cmd) {
      if (solve.method != "qir" || !solve.trace_path.empty()) {
        err << "error: solve refines with qir and writes no trace\n";
        return kParseError;
      }
      return run_solve(solve, out, err);
    }
    if (*bench_cmd) return run_bench(bench, out, err);
  } catch (const InvalidBracket& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidBracket;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kParseError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kParseError;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kParseError;
  }
  return kParseError;
}

}  // namespace qir::cli
