#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace lempertlab {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0;
  double budget = 0;  // wall-clock limit in seconds
};

struct AcceptanceOptions {
  unsigned seed = 7;
  int jobs = 1;
  // fraction of the sample counts, for quick runs of the same code paths
  double scale = 1.0;
  std::ostream* log = nullptr;
};

CriterionResult criterion_closed_forms(const AcceptanceOptions& o);
CriterionResult criterion_membership(const AcceptanceOptions& o);
CriterionResult criterion_automorphisms(const AcceptanceOptions& o);
CriterionResult criterion_origin_sandwich(const AcceptanceOptions& o);
CriterionResult criterion_general_gap(const AcceptanceOptions& o);
CriterionResult criterion_kobayashi(const AcceptanceOptions& o);
CriterionResult criterion_normalization(const AcceptanceOptions& o);

std::vector<std::function<CriterionResult(const AcceptanceOptions&)>> all_criteria();

// "criterion N: PASS|FAIL  name  detail  (t s / budget s)"
std::string format_result(const CriterionResult& r);

}  // namespace lempertlab
