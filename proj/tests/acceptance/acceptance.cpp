// One PASS/FAIL line per acceptance criterion; exit status 0 iff all pass.
#include <cstdio>

#include "cdgreen/checks.hpp"

int main() {
  using namespace cdg::checks;
  const Options opts;
  std::vector<CheckResult> results = run(opts);
  results.push_back(determinism(opts, results));
  int failed = 0;
  for (const CheckResult& r : results) {
    std::printf("%s %2d %s: %s\n", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(), r.summary.c_str());
    failed += r.pass ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(results.size()) - failed, results.size());
  return failed == 0 ? 0 : 1;
}
