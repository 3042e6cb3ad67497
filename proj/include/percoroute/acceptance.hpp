#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace percoroute::acceptance {

struct CriterionResult {
  std::string id;
  bool pass = false;
  std::string detail;
};

struct Options {
  std::vector<std::string> only;  // empty: run every criterion
  int threads = 0;
};

// Runs the acceptance criteria A1..A8, streaming one PASS/FAIL line per
// criterion to `out`. Returns the number of failures.
int run_and_report(const Options& options, std::ostream& out);

std::vector<CriterionResult> run(const Options& options, std::ostream& out);

}  // namespace percoroute::acceptance
