#ifndef ROOTFLOW_TOOLS_ACCEPTANCE_HPP
#define ROOTFLOW_TOOLS_ACCEPTANCE_HPP

#include "rootflow/scalar.hpp"

#include <functional>
#include <string>
#include <vector>

namespace rootflow::verify {

struct Options {
  Tolerances tol;
  std::string filter;                 // substring of the criterion name; empty runs all
  unsigned long seed = 20240611;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

struct Criterion {
  int id;
  const char* name;
  const char* summary;
};

const std::vector<Criterion>& criteria();

std::vector<CriterionResult> run(const Options& opt,
                                 const std::function<void(const CriterionResult&)>& on_result = {});

// "PASS [ 1] bezoutiant (0.12 s) detail"
std::string format(const CriterionResult& r);

}  // namespace rootflow::verify

#endif  // ROOTFLOW_TOOLS_ACCEPTANCE_HPP
