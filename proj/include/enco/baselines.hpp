#pragma once

#include <map>
#include <string>
#include <vector>

#include "enco/bayes.hpp"
#include "enco/types.hpp"

namespace enco {

// Standard naive Bayes rankings, computed directly from the count tables
// without the weight machinery. Kept as a separate code path on purpose: the
// unit-weight reduction of the weighted predictor is checked against these.
Prediction predict_nbc(const CountModel& model, const TemporalContext& ctx, int k);
Prediction predict_nbc_duration(const CountModel& model, const TemporalContext& ctx,
                                const PoiId& poi, int k);
Prediction predict_nbc_contacts(const CountModel& model, const TemporalContext& ctx, int k);

// Spatio-temporal Gaussian baseline: class prior times Gaussian likelihoods
// of the day of week and the hour of day, fitted per class. Both are treated
// as plain reals (no circular wraparound). Variances are population (MLE)
// estimates floored at kGaussianVarianceFloor, so single-observation classes
// stay finite.
inline constexpr double kGaussianVarianceFloor = 0.25;

struct GaussianObservation {
  double phi = 0;
  double hour = 0;
  std::string label;
};

struct GaussianStModel {
  struct ClassStats {
    std::int64_t count = 0;
    double mean_phi = 0, var_phi = 0;
    double mean_hour = 0, var_hour = 0;
  };
  std::map<std::string, ClassStats> classes;
  std::int64_t total = 0;
};

GaussianStModel fit_gaussian_st(const std::vector<GaussianObservation>& observations);

Prediction predict_gaussian_st(const GaussianStModel& model, double phi, double hour, int k);

// Featurized records expose the slot ι, not a raw hour; the baseline uses
// the slot midpoint ι·H + H/2 as the hour.
double slot_hour(int iota, int slot_hours);

GaussianStModel fit_gaussian_st(const std::vector<FeaturizedRecord>& records, int slot_hours);

Prediction predict_gaussian_st(const GaussianStModel& model, const TemporalContext& ctx,
                               int slot_hours, int k);

}  // namespace enco
