#ifndef LFCNORM_VERIFY_HPP
#define LFCNORM_VERIFY_HPP

#include <random>
#include <string>
#include <vector>

#include "lfcnorm/normlab.hpp"
#include "lfcnorm/params.hpp"
#include "lfcnorm/vectors.hpp"

namespace lfcnorm {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SuiteResult {
  std::string suite;
  std::vector<CheckResult> checks;
  bool passed() const;
};

/// Random vector with support size in [n_lo, n_hi], labels drawn from a
/// fixed pool (collisions in magnitude are possible, exercising the
/// tie-break), values in ±[0.05, 2].
SparseVector random_vector(std::mt19937_64& rng, int n_lo, int n_hi);

/// x rescaled so that aux_norm(x) equals target.
SparseVector scale_to_aux(const SparseVector& x, const ParamSchedule& s,
                          double p, double target);

// Named verification suites. Counts control the sampling effort so the
// CLI defaults stay quick while the acceptance suite can run the full
// prescribed sizes.
SuiteResult suite_schedule(const Config& cfg);
SuiteResult suite_oracle(const Config& cfg, int cases);
SuiteResult suite_sandwich(const Config& cfg, int cases_per_p);
SuiteResult suite_lfc(const Config& cfg, int points, int samples);
SuiteResult suite_smoothness(const Config& cfg, int grad_points,
                             int sphere_dirs);
SuiteResult suite_combinatorics(const Config& cfg, int families,
                                int small_families);

std::vector<std::string> suite_names();
/// Dispatch by name with CLI-sized defaults; throws std::invalid_argument
/// for unknown names.
SuiteResult run_suite(const std::string& name, const Config& cfg);

}  // namespace lfcnorm

#endif  // LFCNORM_VERIFY_HPP
