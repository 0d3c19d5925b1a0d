// One PASS/FAIL line per acceptance criterion; exit status 0 only if all pass.
#include <cstdlib>
#include <iostream>

#include "lempertlab/acceptance.hpp"

using namespace lempertlab;

int main(int argc, char** argv) {
  AcceptanceOptions o;
  if (const char* s = std::getenv("LEMPERTLAB_SEED")) o.seed = static_cast<unsigned>(std::strtoul(s, nullptr, 10));
  o.log = &std::cout;
  bool all = true;
  int only = argc > 1 ? std::atoi(argv[1]) : 0;
  auto crits = all_criteria();
  for (size_t i = 0; i < crits.size(); ++i) {
    if (only && only != static_cast<int>(i + 1)) continue;
    CriterionResult r = crits[i](o);
    all = all && r.pass;
    std::cout << format_result(r) << std::endl;
  }
  return all ? 0 : 1;
}
