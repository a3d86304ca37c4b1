/**
 * @file trace_io.hpp
 * @brief JSON form of refinement traces.
 *
 * Each record is {iter, N, outcome, width_num, width_den, evals, max_digits};
 * N and the width parts are exact decimal strings.
 */
#pragma once

#include "qir/refine.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace qir {

inline OutcomeKind outcome_from_string(const std::string& s) {
  if (s == "success") return OutcomeKind::Success;
  if (s == "failure") return OutcomeKind::Failure;
  if (s == "failure_narrowed") return OutcomeKind::FailureButNarrowed;
  if (s == "exact_root") return OutcomeKind::ExactRoot;
  throw std::invalid_argument("unknown outcome '" + s + "'");
}

inline nlohmann::json trace_to_json(const std::vector<TraceRecord>& trace) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : trace) {
    out.push_back({{"iter", r.iteration},
                   {"N", r.factor.get_str()},
                   {"outcome", to_string(r.outcome)},
                   {"width_num", r.width_after.get_num().get_str()},
                   {"width_den", r.width_after.get_den().get_str()},
                   {"evals", r.evaluations},
                   {"max_digits", r.max_digits}});
  }
  return out;
}

/// Inverse of trace_to_json. The clamped flag is not serialized and reads back false.
inline std::vector<TraceRecord> trace_from_json(const nlohmann::json& j) {
  std::vector<TraceRecord> trace;
  for (const auto& e : j) {
    TraceRecord r;
    r.iteration = e.at("iter").get<std::size_t>();
    r.factor = Integer(e.at("N").get<std::string>(), 10);
    r.outcome = outcome_from_string(e.at("outcome").get<std::string>());
    r.width_after = make_rational(Integer(e.at("width_num").get<std::string>(), 10),
                                  Integer(e.at("width_den").get<std::string>(), 10));
    r.evaluations = e.at("evals").get<unsigned>();
    r.max_digits = e.at("max_digits").get<std::size_t>();
    trace.push_back(std::move(r));
  }
  return trace;
}

}  // namespace qir
