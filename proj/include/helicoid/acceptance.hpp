#pragma once

#include "helicoid/io.hpp"

#include <string>
#include <vector>

namespace helicoid::acceptance {

struct CriterionResult {
  int id;
  std::string title;
  bool pass;
  Json payload;    // deterministic numbers behind the verdict
  double seconds;  // wall time, kept out of the payload
};

inline constexpr int kCriteria = 10;

// Criteria 1-9 each run one check; 10 reruns 1-9 and compares the
// serialized payloads byte for byte. Throws Error for ids out of range.
CriterionResult run_criterion(int id);
std::vector<CriterionResult> run_all();

// {"criteria": [{id, title, pass, payload}], "pass": all} without timings.
Json suite_payload(const std::vector<CriterionResult>& results);
// Per-criterion wall times for the metadata block.
Json suite_timings(const std::vector<CriterionResult>& results);

// "PASS  3  <title>" / "FAIL  3  <title>".
std::string format_line(const CriterionResult& r);

// Principal curvature of x = Re ∫ Φ at ζ from the first and second
// fundamental forms, with Φ′ by a central complex difference. Independent of
// the closed-form Weierstrass expression.
double fundamental_forms_curvature(const WeierstrassData& data, Complex z);

}  // namespace helicoid::acceptance
