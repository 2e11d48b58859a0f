#pragma once

#include <optional>
#include <string>
#include <vector>

#include "robustmean/estimator.hpp"

namespace robustmean::bench {

inline constexpr const char* kArtifactVersion = "0.1.0";

enum class Setting { gaussian_two_cluster, pareto_constant, csv_file };
enum class SigmaMode { empirical, theoretical };
enum class C2Mode { formula, median_oracle };

Setting setting_from_string(const std::string& s);
std::string to_string(Setting s);

/// One benchmark run: a grid of (eps, n) cells, `trials` seeded trials per
/// cell, each estimator scored against the oracle mean of the trial's sample.
struct ExperimentConfig {
  Setting setting = Setting::gaussian_two_cluster;
  Index d = 100;
  std::vector<Index> n_values = {1000};
  std::vector<double> eps_values = {0.2};
  int trials = 10;
  std::vector<std::string> estimators = {"l1"};
  PursuitConfig algo;
  RngSeed seed;
  std::string output_path = "bench";
  int parallelism = 1;
  SigmaMode sigma_mode = SigmaMode::empirical;
  C2Mode c2_mode = C2Mode::formula;
  double pareto_shape = 2.5;
  double pareto_scale = 1.0;
  double filter_c = 1.5;
  int filter_max_rounds = -1;  // -1: half the sample size
  std::string csv_path;        // data file for Setting::csv_file
  bool csv_header = false;
  std::optional<double> sigma_override;
  double theory_delta = 0.1;

  void validate() const;
};

struct TrialRecord {
  double eps = 0.0;
  Index n = 0;
  int trial = 0;
  std::string estimator;
  double recovery_error = 0.0;
  double wall_time_ms = 0.0;
  int iterations = 0;
  std::string terminated_by;  // empty for one-shot estimators
  bool failed = false;
  std::string error;
};

struct AggregateRecord {
  double eps = 0.0;
  Index n = 0;
  std::string estimator;
  double mean_error = 0.0;
  double std_error = 0.0;  // standard error of the mean
  double mean_time_ms = 0.0;
  int trials = 0;
  int failures = 0;
};

/// Theoretical error bound evaluated at the schedule horizon for one grid
/// cell; annotation only (vacuous whenever the finite-sample constants
/// degenerate, which they do at desk scale).
struct TheoryAnnotation {
  double eps = 0.0;
  Index n = 0;
  double c2_0 = 0.0;
  int horizon = 1;
  double bound = 0.0;
  bool vacuous = true;
};

struct BenchReport {
  std::string artifact_version;
  std::string timestamp;
  std::string config_echo;  // JSON object, stored verbatim
  std::vector<TrialRecord> trials;
  std::vector<AggregateRecord> aggregates;
  std::vector<TheoryAnnotation> theory;
};

/// Flat key = value text, '#' comments; unknown keys are errors.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// Applies one key = value assignment (CLI overrides reuse the file syntax).
void apply_config_key(ExperimentConfig& cfg, const std::string& key,
                      const std::string& value);

BenchReport run_bench(const ExperimentConfig& cfg);

/// Writes <base>.json and <base>.csv (the table: one row per (eps, n) cell,
/// one column per estimator).
void write_report(const BenchReport& report, const std::string& base_path);

/// Reloads a report and re-derives the aggregates from the per-trial rows;
/// throws if the stored aggregates disagree.
BenchReport load_report(const std::string& json_path);

std::vector<AggregateRecord> aggregate_trials(const std::vector<TrialRecord>& trials);

/// Sidecar metadata written next to a generated CSV sample.
struct SampleMeta {
  Setting setting = Setting::csv_file;
  Index d = 0;
  Index n = 0;
  double eps = 0.0;
  RngSeed seed;
  std::vector<bool> inlier_mask;
  Vector oracle_mean;
  Vector true_mean;
  double sigma_empirical = 0.0;
  std::optional<double> sigma_theoretical;
};

std::string meta_path_for(const std::string& csv_path);
void write_sample_meta(const std::string& path, const SampleMeta& meta);
SampleMeta read_sample_meta(const std::string& path);

/// Resolves the sigma handed to the estimators for one sample.
double resolve_sigma(const ExperimentConfig& cfg, const LabeledSample& sample);

/// Generates (or loads) the sample for one grid cell and trial.
LabeledSample make_sample(const ExperimentConfig& cfg, double eps, Index n,
                          RngSeed trial_seed);

}  // namespace robustmean::bench
