#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace hamsolve::acceptance {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::vector<std::string> details;  // one measured quantity per entry

  /// "criterion <id> PASS|FAIL <title>"
  std::string headline() const;
};

// Thresholds.
inline constexpr int kEquivalenceOrder = 10;
inline constexpr double kEquivalenceTolerance = 1e-10;
inline constexpr double kMutationHbar = -1.01;
inline constexpr double kMutationMinDiff = 1e-3;

inline constexpr double kStartResidualMax = 1e-9;
inline constexpr double kEndpointRelTolerance = 1e-12;
inline constexpr int kEndpointSamples = 10;

inline constexpr int kPathSteps = 20;
inline constexpr double kPathResidualMax = 1e-8;
inline constexpr double kPathConditionMax = 1e12;
inline constexpr double kHalvingMinRatio = 1.9;

inline constexpr int kFrechetSamples = 20;
inline constexpr double kFrechetRelTolerance = 1e-6;

inline constexpr int kControlOrder = 15;
inline constexpr double kControlResidualMax = 1e-2;
inline constexpr double kBracketLo = -2.0;
inline constexpr double kBracketHi = -0.05;

inline constexpr int kTanhOrder = 10;
inline constexpr double kTanhErrorMax = 1e-4;
inline constexpr double kPoissonErrorMax = 1e-10;
inline constexpr double kManufacturedErrorMax = 1e-5;
// Frozen from an optimal_hbar run on manufactured-quad over [-2, -0.05] at
// M = 15 (hbar* = -1.019901, residual 1.8e-16, error 1.8e-9).
inline constexpr int kManufacturedOrder = 15;
inline constexpr double kManufacturedHbar = -1.0199;

inline constexpr int kJetCases = 100;
inline constexpr int kJetMaxDegree = 4;
inline constexpr int kJetMaxLength = 6;
inline constexpr double kJetRelTolerance = 1e-12;

inline constexpr std::uint64_t kSeed = 20240611;

CriterionResult check_hpm_equivalence();
CriterionResult check_endpoint_identities();
CriterionResult check_continuation();
CriterionResult check_frechet_consistency();
CriterionResult check_convergence_control();
CriterionResult check_exact_recovery();
CriterionResult check_jet_oracle();

/// Runs `produce` into two fresh directories under `scratch` and compares
/// the resulting trees byte for byte.
CriterionResult check_determinism(const std::function<void(const std::filesystem::path&)>& produce,
                                  const std::filesystem::path& scratch);

/// Criteria 1-7 in order.
std::vector<CriterionResult> run_numeric_criteria();

/// Empty when identical, otherwise the first difference found.
std::string compare_trees(const std::filesystem::path& a, const std::filesystem::path& b);

}  // namespace hamsolve::acceptance
