#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "enco/featurize.hpp"
#include "enco/types.hpp"

namespace enco {

enum class LabelKind { poi, duration, contact };

const char* to_string(LabelKind kind);
LabelKind label_kind_from_string(const std::string& s);

// Predictor features. φ and ι have fixed domains (7 and 24/H); the PoI
// feature of the duration model ranges over the PoIs observed in training.
enum class Feature { phi, iota, poi };

const char* feature_name(Feature f);
Feature feature_from_name(const std::string& s);

struct FeatureTable {
  Feature feature = Feature::phi;
  // |V_f| used in the smoothing denominator: 7 for φ, 24/H for ι, the
  // number of observed values for open domains.
  std::int64_t domain_size = 0;
  // value -> class -> count
  std::map<std::string, std::map<std::string, std::int64_t>> counts;
};

// Per-user smoothed count tables for one label kind. Counts, not
// probabilities, are stored; alpha can change without a refit.
struct CountModel {
  LabelKind label_kind = LabelKind::poi;
  double alpha = 1.0;
  std::int64_t total = 0;
  std::map<std::string, std::int64_t> class_counts;
  std::vector<FeatureTable> features;

  // Duration models only: bin edges and the per-class representative
  // duration (median of the training durations in the bin).
  std::vector<Seconds> bin_edges;
  std::map<std::string, double> representatives;

  double log_prior(const std::string& cls) const;
  double log_conditional(std::size_t feature_index, const std::string& value,
                         const std::string& cls) const;
  const FeatureTable* find_feature(Feature f) const;
};

enum class WeightMode { shared, adaptive, unit };

const char* to_string(WeightMode mode);
WeightMode weight_mode_from_string(const std::string& s);

enum class KlNorm { splitinfo, plain };

// KL-derived feature weights for one label kind.
struct WeightSet {
  LabelKind label_kind = LabelKind::poi;
  WeightMode mode = WeightMode::unit;
  std::map<Feature, double> weights;

  static WeightSet unit(LabelKind kind);
  double at(Feature f) const;
};

struct RankedClass {
  std::string label;
  double log_score = 0;
};

// Top-k classes, scores non-increasing. Ties are broken by higher prior
// count, then lexicographic label.
struct Prediction {
  std::vector<RankedClass> ranked;
  int k_requested = 0;
};

// Builds the count tables for one user's records. Label and feature layout
// per kind: poi -> label poi, features (φ, ι); duration -> label duration
// bin, features (φ, ι, poi); contact -> label peer, features (φ, ι).
// Throws std::invalid_argument on empty input.
CountModel fit(const std::vector<FeaturizedRecord>& records, LabelKind kind,
               double alpha = 1.0, int slot_count = 12,
               const DurationBins* bins = nullptr);

// Average mutual information between class and feature, normalized by the
// feature's split information (or unnormalized with KlNorm::plain). Computed
// from the raw empirical counts with the 0·log0 convention; a single-valued
// feature gets weight 0.
double kl_weight(const CountModel& model, Feature f, KlNorm norm = KlNorm::splitinfo);

// Per-user weights from the user's own counts.
WeightSet adaptive_weights(const CountModel& model, KlNorm norm = KlNorm::splitinfo);

// Weights from the pooled count tables of all users.
WeightSet shared_weights(const std::vector<const CountModel*>& models,
                         KlNorm norm = KlNorm::splitinfo);

CountModel pool_counts(const std::vector<const CountModel*>& models);

Prediction predict_poi(const CountModel& model, const WeightSet& weights,
                       const TemporalContext& ctx, int k);

Prediction predict_duration(const CountModel& model, const WeightSet& weights,
                            const TemporalContext& ctx, const PoiId& poi, int k);

Prediction predict_contacts(const CountModel& model, const WeightSet& weights,
                            const TemporalContext& ctx, int k);

}  // namespace enco
