#pragma once

#include <string>
#include <string_view>
#include <vector>

/// The ten acceptance experiments, shared by the acceptance test binary and
/// the `verify` command.
namespace bsl::acceptance {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;  // measured values against the pinned tolerances
  double seconds = 0.0;
};

/// Criterion ids for a suite name: "all" or one of exponents, spectral, profile,
/// weak, strong, removability, scaling, transforms, subsolution, classify.
/// Throws Usage for unknown names.
std::vector<int> suite_ids(std::string_view suite);
std::vector<std::string> suite_names();

CriterionResult run(int id);

/// "PASS  4 weak-singularity  max|r u/cos - 1| = ... (12.3 s)"
std::string format_line(const CriterionResult& r);

}  // namespace bsl::acceptance
