#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace cdg::checks {

struct CheckResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string summary;     // one line, deterministic
  nlohmann::json metrics;  // measured numbers
};

struct Options {
  bool parallel = true;
};

struct CheckInfo {
  int id;
  const char* name;
  CheckResult (*run)(const Options&);
};

// Numerical criteria 1-14.
const std::vector<CheckInfo>& registry();

// Runs the numerical criteria (all when `only` is empty). Exceptions inside a
// check turn into a failed result.
std::vector<CheckResult> run(const Options& opts, const std::vector<int>& only = {});

// Criterion 15: runs the numerical criteria a second time and compares the
// serialised reports byte for byte.
CheckResult determinism(const Options& opts, const std::vector<CheckResult>& first,
                        const std::vector<int>& only = {});

nlohmann::json report(const std::vector<CheckResult>& results);

struct BesselRef {
  double s, k0, k1;
};
// Arbitrary-precision reference table compiled into the library.
const std::vector<BesselRef>& bessel_reference();

// Frozen relative L1 tolerance for G_h against the bar_square approximation
// (uniform mesh, N = 256, eps = 0.05, a = 1, source (1/2, 1/2)).
inline constexpr double kFdImageTolerance = 0.02;

}  // namespace cdg::checks
