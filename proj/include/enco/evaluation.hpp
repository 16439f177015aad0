#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "enco/baselines.hpp"
#include "enco/bayes.hpp"
#include "enco/featurize.hpp"
#include "enco/types.hpp"

namespace enco {

enum class Task { poi, duration, contact };

const char* to_string(Task t);
Task task_from_string(const std::string& s);

enum class Variant { weighted, nbc, gaussian_st };

const char* to_string(Variant v);
Variant variant_from_string(const std::string& s);

enum class SplitMode { random, chronological };

const char* to_string(SplitMode m);
SplitMode split_mode_from_string(const std::string& s);

struct EvalConfig {
  int folds = 4;
  std::vector<int> ks = {1, 2, 3};
  // Default gates: 75 for encounter traces, 350 for colocation traces.
  int min_records = 75;
  std::uint64_t seed = 0;
  SplitMode split_mode = SplitMode::random;
  double alpha = 1.0;
  int slot_hours = 2;
  WeightMode weight_mode = WeightMode::shared;
  KlNorm kl_norm = KlNorm::splitinfo;
  // Ablation switch: condition the duration predictor on the true PoI
  // instead of the PoI predictor's top-1.
  bool duration_chain_on_true_poi = false;
  DurationBins bins;
  int threads = 1;
};

struct UserAccuracy {
  UserId user;
  Task task = Task::poi;
  std::string variant;  // weighted_shared | weighted_adaptive | weighted_unit | nbc | gaussian_st
  int k = 0;
  double accuracy = 0;
  int n_test = 0;
};

std::string variant_label(Variant v, WeightMode mode);

// Fold id per record index. Folds are disjoint, cover everything, and sizes
// differ by at most one (remainder goes to the earlier folds). Random mode
// shuffles with the seed; chronological mode cuts contiguous blocks of the
// input order.
std::vector<int> kfold_assignment(std::size_t n, int folds, std::uint64_t seed, SplitMode mode);

struct FoldSplit {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

std::vector<FoldSplit> kfold_split(std::size_t n, int folds, std::uint64_t seed, SplitMode mode);

// Adjusted Fisher-Pearson standardized moment coefficient G1. Zero for
// fewer than 3 samples or zero variance.
double sample_skewness(const std::vector<double>& xs);

// While |G1| > 1 and more than 3 elements remain, removes the element
// farthest from the median (the larger value on a tie).
std::vector<double> skewness_filter(std::vector<double> durations);

// Stable per-user RNG stream: FNV-1a of the user id mixed into the seed.
std::uint64_t user_seed(std::uint64_t seed, const UserId& user);

// Per-user k-fold CV: refit per fold, query ctx=(φ,ι_s) per test record,
// accuracy averaged over folds, one row per (user, k).
// Shared weights are recomputed per fold from the pooled training counts of
// every gated user. The duration task scores a prediction correct when it
// lands within μ±σ of the test fold's skewness-filtered duration sample for
// the record's (φ, ι, PoI) group. Top-k accuracy monotonicity in k is
// asserted on every run.
std::vector<UserAccuracy> evaluate_task(
    const std::vector<std::pair<UserId, std::vector<FeaturizedRecord>>>& users, Task task,
    Variant variant, const EvalConfig& cfg);

// Duration-rule core, exposed for tests: correctness of one predicted value
// against one group sample (after skewness filtering).
bool duration_prediction_correct(double predicted_seconds, const std::vector<double>& group);

// Accuracy-distribution report per (task, variant, k): sorted values,
// empirical CDF, median, and the fraction of users strictly above each of
// {0.5, 0.7, 0.8}.
struct DistributionSummary {
  std::vector<double> sorted_accuracies;
  double median = 0;
  double frac_gt_50 = 0;
  double frac_gt_70 = 0;
  double frac_gt_80 = 0;
};

using AccuracyReport = std::map<std::tuple<std::string, std::string, int>, DistributionSummary>;

AccuracyReport accuracy_report(const std::vector<UserAccuracy>& rows);

// Per-user results CSV: user,task,variant,k,n_test,accuracy
void write_results_csv(std::ostream& out, const std::vector<UserAccuracy>& rows);
std::vector<UserAccuracy> read_results_csv(std::istream& in);

// Distribution CSV: task,variant,k,quantile,accuracy. CDF rows carry the
// numeric quantile i/n; summary rows carry median / frac_gt_* in the
// quantile column.
void write_distribution_csv(std::ostream& out, const AccuracyReport& report);

}  // namespace enco
