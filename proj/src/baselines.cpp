#include "enco/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace enco {

namespace {

struct Candidate {
  const std::string* label;
  double score;
  std::int64_t prior;
};

Prediction take_top_k(std::vector<Candidate>& candidates, int k) {
  Prediction pred;
  pred.k_requested = k;
  if (k <= 0) return pred;
  auto better = [](const Candidate& a, const Candidate& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.prior != b.prior) return a.prior > b.prior;
    return *a.label < *b.label;
  };
  std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(k), candidates.size());
  std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(take),
                    candidates.end(), better);
  pred.ranked.reserve(take);
  for (std::size_t i = 0; i < take; ++i) {
    pred.ranked.push_back(RankedClass{*candidates[i].label, candidates[i].score});
  }
  return pred;
}

// Plain product-of-conditionals scoring in log space, every weight
// implicitly 1.
Prediction nbc_rank(const CountModel& model,
                    const std::vector<std::pair<Feature, std::string>>& feature_values, int k) {
  std::vector<Candidate> candidates;
  candidates.reserve(model.class_counts.size());
  for (const auto& [cls, n] : model.class_counts) {
    double score = model.log_prior(cls);
    for (const auto& [f, value] : feature_values) {
      for (std::size_t i = 0; i < model.features.size(); ++i) {
        if (model.features[i].feature == f) {
          score += model.log_conditional(i, value, cls);
        }
      }
    }
    candidates.push_back(Candidate{&cls, score, n});
  }
  return take_top_k(candidates, k);
}

double log_normal_pdf(double x, double mean, double variance) {
  double v = std::max(variance, kGaussianVarianceFloor);
  double d = x - mean;
  return -0.5 * std::log(2.0 * std::numbers::pi * v) - d * d / (2.0 * v);
}

}  // namespace

Prediction predict_nbc(const CountModel& model, const TemporalContext& ctx, int k) {
  if (model.label_kind != LabelKind::poi) {
    throw std::invalid_argument("predict_nbc: model has wrong label kind");
  }
  return nbc_rank(model,
                  {{Feature::phi, std::to_string(ctx.phi)},
                   {Feature::iota, std::to_string(ctx.iota)}},
                  k);
}

Prediction predict_nbc_duration(const CountModel& model, const TemporalContext& ctx,
                                const PoiId& poi, int k) {
  if (model.label_kind != LabelKind::duration) {
    throw std::invalid_argument("predict_nbc_duration: model has wrong label kind");
  }
  return nbc_rank(model,
                  {{Feature::phi, std::to_string(ctx.phi)},
                   {Feature::iota, std::to_string(ctx.iota)},
                   {Feature::poi, poi}},
                  k);
}

Prediction predict_nbc_contacts(const CountModel& model, const TemporalContext& ctx, int k) {
  if (model.label_kind != LabelKind::contact) {
    throw std::invalid_argument("predict_nbc_contacts: model has wrong label kind");
  }
  return nbc_rank(model,
                  {{Feature::phi, std::to_string(ctx.phi)},
                   {Feature::iota, std::to_string(ctx.iota)}},
                  k);
}

GaussianStModel fit_gaussian_st(const std::vector<GaussianObservation>& observations) {
  if (observations.empty()) throw std::invalid_argument("fit_gaussian_st: no observations");
  GaussianStModel m;
  m.total = static_cast<std::int64_t>(observations.size());

  std::map<std::string, std::vector<const GaussianObservation*>> by_class;
  for (const auto& o : observations) by_class[o.label].push_back(&o);

  for (const auto& [label, group] : by_class) {
    GaussianStModel::ClassStats s;
    s.count = static_cast<std::int64_t>(group.size());
    double n = static_cast<double>(group.size());
    for (const auto* o : group) {
      s.mean_phi += o->phi;
      s.mean_hour += o->hour;
    }
    s.mean_phi /= n;
    s.mean_hour /= n;
    for (const auto* o : group) {
      s.var_phi += (o->phi - s.mean_phi) * (o->phi - s.mean_phi);
      s.var_hour += (o->hour - s.mean_hour) * (o->hour - s.mean_hour);
    }
    s.var_phi /= n;
    s.var_hour /= n;
    m.classes[label] = s;
  }
  return m;
}

Prediction predict_gaussian_st(const GaussianStModel& model, double phi, double hour, int k) {
  std::vector<Candidate> candidates;
  candidates.reserve(model.classes.size());
  for (const auto& [label, s] : model.classes) {
    double score = std::log(static_cast<double>(s.count) / static_cast<double>(model.total));
    score += log_normal_pdf(phi, s.mean_phi, s.var_phi);
    score += log_normal_pdf(hour, s.mean_hour, s.var_hour);
    candidates.push_back(Candidate{&label, score, s.count});
  }
  return take_top_k(candidates, k);
}

double slot_hour(int iota, int slot_hours) {
  return iota * slot_hours + slot_hours / 2.0;
}

GaussianStModel fit_gaussian_st(const std::vector<FeaturizedRecord>& records, int slot_hours) {
  std::vector<GaussianObservation> obs;
  obs.reserve(records.size());
  for (const auto& r : records) {
    obs.push_back({static_cast<double>(r.phi), slot_hour(r.iota_s, slot_hours), r.poi});
  }
  return fit_gaussian_st(obs);
}

Prediction predict_gaussian_st(const GaussianStModel& model, const TemporalContext& ctx,
                               int slot_hours, int k) {
  return predict_gaussian_st(model, static_cast<double>(ctx.phi), slot_hour(ctx.iota, slot_hours),
                             k);
}

}  // namespace enco
