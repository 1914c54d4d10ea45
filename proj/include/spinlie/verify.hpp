#ifndef SPINLIE_VERIFY_HPP
#define SPINLIE_VERIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "spinlie/fixtures.hpp"

namespace spinlie {

/// Worst residual of one property over all of its samples.
struct SuiteResult {
  std::string module;
  std::string name;
  int samples = 0;
  double maxResidual = 0.0;
  double threshold = 0.0;
  bool pass = true;
};

struct VerifyOptions {
  std::uint64_t seed = 1;
  int samples = 10;               ///< draws per (suite, fixture); 0 runs nothing
  std::vector<Fixture> fixtures;  ///< empty: builtinFixtures()
};

struct VerifySummary {
  std::vector<SuiteResult> suites;
  bool pass() const;
};

/// Runs every property suite. Pointwise preconditions failing at a sampled
/// point (a chart singularity, say) are counted as failures, not skipped.
VerifySummary runVerify(const VerifyOptions& options);

}  // namespace spinlie

#endif  // SPINLIE_VERIFY_HPP
