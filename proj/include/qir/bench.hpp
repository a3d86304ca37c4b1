/**
 * @file bench.hpp
 * @brief Deterministic benchmark suite: iteration, evaluation and digit
 * counters per case, checked against optional expectations.
 *
 * Suite file: a JSON array of cases
 *
 *   { "name": "x5-2",
 *     "polynomial": "x^5-2",            // or "fixture:f1" / "fixture:f2"
 *     "bracket": ["1", "2"],            // or "isolate"
 *     "epsilons": ["2^-32"],
 *     "options": {"clamp_final": false, "approx_predict": false},
 *     "expected": {"max_iterations": 6, "max_digits": 50,
 *                  "iteration_window": [32, 36],
 *                  "kth_root": {"k": 5, "radicand": 2, "digits": 1000}} }
 */
#pragma once

#include "qir/fixtures.hpp"
#include "qir/isolate.hpp"
#include "qir/parse.hpp"
#include "qir/refine.hpp"

#include <json.hpp>

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

namespace qir::bench {

struct KthRootCheck {
  unsigned long k = 0;
  long radicand = 0;
  unsigned long digits = 0;
};

struct Expectations {
  std::optional<std::size_t> max_iterations;
  std::optional<std::size_t> max_digits;
  std::optional<std::pair<std::size_t, std::size_t>> iteration_window;
  std::optional<KthRootCheck> kth_root;
};

struct BenchCase {
  std::string name;
  std::string polynomial;
  std::optional<std::pair<std::string, std::string>> bracket;  ///< nullopt: isolate first
  std::vector<std::string> epsilons;
  RefineOptions options;
  Expectations expected;
};

struct CaseResult {
  std::string name;
  std::string epsilon;
  std::size_t roots = 0;
  std::size_t iterations = 0;
  unsigned evaluations = 0;
  std::size_t max_digits = 0;
  bool passed = true;
  std::vector<std::string> failures;
};

inline Polynomial resolve_polynomial(const std::string& spec) {
  if (spec == "fixture:f1") return fixtures::frisco_f1();
  if (spec == "fixture:f2") return fixtures::frisco_f2();
  if (spec.rfind("fixture:", 0) == 0) throw std::invalid_argument("unknown fixture '" + spec + "'");
  return parse_polynomial(spec);
}

inline BenchCase case_from_json(const nlohmann::json& j) {
  BenchCase c;
  c.name = j.at("name").get<std::string>();
  c.polynomial = j.at("polynomial").get<std::string>();
  const auto& br = j.at("bracket");
  if (br.is_string()) {
    if (br.get<std::string>() != "isolate")
      throw std::invalid_argument("case '" + c.name + "': bracket must be a pair or \"isolate\"");
  } else {
    if (!br.is_array() || br.size() != 2) throw std::invalid_argument("case '" + c.name + "': bracket needs two endpoints");
    c.bracket = std::make_pair(br[0].get<std::string>(), br[1].get<std::string>());
  }
  c.epsilons = j.at("epsilons").get<std::vector<std::string>>();
  for (const auto& e : c.epsilons) (void)parse_tolerance(e);  // reject bad tolerances up front
  if (j.contains("options")) {
    const auto& o = j["options"];
    c.options.clamp_final = o.value("clamp_final", false);
    c.options.approx_predict = o.value("approx_predict", false);
  }
  if (j.contains("expected")) {
    const auto& e = j["expected"];
    if (e.contains("max_iterations")) c.expected.max_iterations = e["max_iterations"].get<std::size_t>();
    if (e.contains("max_digits")) c.expected.max_digits = e["max_digits"].get<std::size_t>();
    if (e.contains("iteration_window")) {
      const auto& w = e["iteration_window"];
      c.expected.iteration_window = std::make_pair(w.at(0).get<std::size_t>(), w.at(1).get<std::size_t>());
    }
    if (e.contains("kth_root")) {
      const auto& k = e["kth_root"];
      c.expected.kth_root = KthRootCheck{k.at("k").get<unsigned long>(), k.at("radicand").get<long>(),
                                         k.at("digits").get<unsigned long>()};
    }
  }
  return c;
}

inline std::vector<BenchCase> suite_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw std::invalid_argument("bench suite must be a JSON array");
  std::vector<BenchCase> cases;
  for (const auto& e : j) cases.push_back(case_from_json(e));
  return cases;
}

inline CaseResult run_case(const BenchCase& c, const std::string& epsilon) {
  CaseResult r;
  r.name = c.name;
  r.epsilon = epsilon;
  const Polynomial f = resolve_polynomial(c.polynomial);
  const Rational eps = parse_tolerance(epsilon);

  std::vector<Bracket> brackets;
  Polynomial target = f;
  if (c.bracket) {
    brackets.push_back(Bracket::around(f, parse_rational(c.bracket->first), parse_rational(c.bracket->second)));
  } else {
    IsolationResult iso = isolate_real_roots(f);
    if (iso.status == IsolationStatus::RecursionTooDeep) r.failures.emplace_back("isolation: recursion too deep");
    target = iso.square_free;
    brackets = iso.brackets;
    r.roots += iso.exact_roots.size();
  }

  std::vector<RefineReport> reports;
  for (const auto& b : brackets) {
    reports.push_back(refine_interval(target, b, eps, c.options));
    const auto& rep = reports.back();
    ++r.roots;
    r.iterations += rep.iterations();
    r.evaluations += rep.evaluations();
    r.max_digits = std::max(r.max_digits, rep.max_digits());
    if (const auto* fin = std::get_if<Bracket>(&rep.result)) {
      if (width(*fin) > eps) r.failures.emplace_back("final width exceeds tolerance");
      if (sign_at(target, fin->lo()) * sign_at(target, fin->hi()) != Sign::Negative)
        r.failures.emplace_back("final interval lost its sign change");
    } else if (sign_at(target, std::get<ExactRoot>(rep.result).value) != Sign::Zero) {
      r.failures.emplace_back("reported exact root is not a root");
    }
  }

  const Expectations& ex = c.expected;
  if (ex.max_iterations && r.iterations > *ex.max_iterations)
    r.failures.push_back("iterations " + std::to_string(r.iterations) + " > " + std::to_string(*ex.max_iterations));
  if (ex.max_digits && r.max_digits > *ex.max_digits)
    r.failures.push_back("max digits " + std::to_string(r.max_digits) + " > " + std::to_string(*ex.max_digits));
  if (ex.iteration_window &&
      (r.iterations < ex.iteration_window->first || r.iterations > ex.iteration_window->second))
    r.failures.push_back("iterations " + std::to_string(r.iterations) + " outside [" +
                         std::to_string(ex.iteration_window->first) + ", " +
                         std::to_string(ex.iteration_window->second) + "]");
  if (ex.kth_root) {
    const Integer oracle = fixtures::kth_root_digits(ex.kth_root->radicand, ex.kth_root->k, ex.kth_root->digits);
    bool ok = !reports.empty();
    for (const auto& rep : reports) {
      if (const auto* fin = std::get_if<Bracket>(&rep.result)) {
        ok = ok && fixtures::matches_digits(fin->lo(), fin->hi(), oracle, ex.kth_root->digits);
      } else {
        const Rational& x = std::get<ExactRoot>(rep.result).value;
        ok = ok && floor(x * pow10(static_cast<long>(ex.kth_root->digits))) == oracle;
      }
    }
    if (!ok) r.failures.emplace_back("digits disagree with the integer k-th root");
  }
  r.passed = r.failures.empty();
  return r;
}

/// Runs every (case, epsilon) pair in suite order.
inline std::vector<CaseResult> run_suite(const std::vector<BenchCase>& suite) {
  std::vector<CaseResult> out;
  for (const auto& c : suite)
    for (const auto& e : c.epsilons) out.push_back(run_case(c, e));
  return out;
}

inline nlohmann::json to_json(const CaseResult& r) {
  return {{"name", r.name},         {"eps", r.epsilon},           {"roots", r.roots},
          {"iterations", r.iterations}, {"evaluations", r.evaluations}, {"max_digits", r.max_digits},
          {"passed", r.passed},     {"failures", r.failures}};
}

inline std::string csv_header() { return "name,eps,roots,iterations,evaluations,max_digits,passed"; }

inline std::string to_csv(const CaseResult& r) {
  return r.name + "," + r.epsilon + "," + std::to_string(r.roots) + "," + std::to_string(r.iterations) + "," +
         std::to_string(r.evaluations) + "," + std::to_string(r.max_digits) + "," + (r.passed ? "pass" : "fail");
}

}  // namespace qir::bench
