#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "betarma/bootstrap.hpp"

namespace barma {

/// One simulation cell: a true model and a sample size.
struct Scenario {
  ModelOrder order;
  ParamVector truth;
  LinkKind link = LinkKind::logit;
  int n = 0;
  std::string label;
};

struct StudyConfig {
  std::vector<Scenario> scenarios;
  int n_mc = 1000;
  int n_boot = 1000;
  double level = 0.95;
  std::uint64_t seed = 1;

  void validate() const;
};

/// Built-in scenario presets expanded over the given sample sizes. The only
/// preset is "paper-s4": the six logit-link models (AR, MA and ARMA(1,1)
/// shapes at precision 20 and 120) used by the simulation study.
std::vector<Scenario> preset_scenarios(const std::string& name,
                                       const std::vector<int>& sizes);

inline constexpr int kNumCiFamilies = 5;

/// Family index order: asymptotic, boot_se, boot_t, percentile,
/// unbiased_centered.
const char* ci_family_name(int family);

/// Per-coordinate aggregates for one estimator kind. Undefined entries
/// (RB at zero truth, SE with a single replication) are NaN.
struct EstimatorMetrics {
  std::vector<double> mean;
  std::vector<double> bias;
  std::vector<double> rb;   // percentage relative bias
  std::vector<double> se;
  std::vector<double> mse;
  double total_rb = 0.0;    // sum of |rb| over defined coordinates
};

struct PointMetrics {
  EstimatorMetrics uncorrected;
  EstimatorMetrics corrected;
};

struct CoverageMetrics {
  std::array<std::vector<double>, kNumCiFamilies> cr;  // per coordinate
  std::array<double, kNumCiFamilies> acr{};
};

struct ScenarioResult {
  Scenario scenario;
  int n_used = 0;
  int n_dropped = 0;
  bool invalid = false;  // more than 20% of replications dropped
  PointMetrics point;
  CoverageMetrics coverage;
};

struct StudyResult {
  StudyConfig config;
  std::vector<ScenarioResult> scenarios;
};

/// Full study: per scenario and replication, simulate on substream
/// (seed, scenario, replication), fit, bootstrap, record point estimates and
/// CI hits against the truth. Dropped replications are counted per scenario.
StudyResult run_study(const StudyConfig& config);

enum class TableFormat { csv, json };

/// Point tables (rows Mean/Bias/RB/SE/MSE, uncorrected/corrected column
/// pairs) and coverage tables (per-family CR and ACR).
std::string emit_tables(const StudyResult& result, TableFormat format);

/// Inverse of the JSON rendering; metric values round-trip exactly.
StudyResult study_from_json(const std::string& text);

}  // namespace barma
