#include "enco/bayes.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace enco {

const char* to_string(LabelKind kind) {
  switch (kind) {
    case LabelKind::poi: return "poi";
    case LabelKind::duration: return "duration";
    case LabelKind::contact: return "contact";
  }
  return "?";
}

LabelKind label_kind_from_string(const std::string& s) {
  if (s == "poi") return LabelKind::poi;
  if (s == "duration") return LabelKind::duration;
  if (s == "contact") return LabelKind::contact;
  throw std::invalid_argument("unknown label kind: " + s);
}

const char* feature_name(Feature f) {
  switch (f) {
    case Feature::phi: return "phi";
    case Feature::iota: return "iota";
    case Feature::poi: return "poi";
  }
  return "?";
}

Feature feature_from_name(const std::string& s) {
  if (s == "phi") return Feature::phi;
  if (s == "iota") return Feature::iota;
  if (s == "poi") return Feature::poi;
  throw std::invalid_argument("unknown feature: " + s);
}

const char* to_string(WeightMode mode) {
  switch (mode) {
    case WeightMode::shared: return "shared";
    case WeightMode::adaptive: return "adaptive";
    case WeightMode::unit: return "unit";
  }
  return "?";
}

WeightMode weight_mode_from_string(const std::string& s) {
  if (s == "shared") return WeightMode::shared;
  if (s == "adaptive") return WeightMode::adaptive;
  if (s == "unit") return WeightMode::unit;
  throw std::invalid_argument("unknown weight mode: " + s);
}

double CountModel::log_prior(const std::string& cls) const {
  auto it = class_counts.find(cls);
  std::int64_t n = it == class_counts.end() ? 0 : it->second;
  double c = static_cast<double>(class_counts.size());
  return std::log((static_cast<double>(n) + alpha) / (static_cast<double>(total) + alpha * c));
}

double CountModel::log_conditional(std::size_t feature_index, const std::string& value,
                                   const std::string& cls) const {
  const FeatureTable& table = features.at(feature_index);
  std::int64_t joint = 0;
  if (auto vit = table.counts.find(value); vit != table.counts.end()) {
    if (auto cit = vit->second.find(cls); cit != vit->second.end()) joint = cit->second;
  }
  auto it = class_counts.find(cls);
  std::int64_t n_cls = it == class_counts.end() ? 0 : it->second;
  return std::log((static_cast<double>(joint) + alpha) /
                  (static_cast<double>(n_cls) + alpha * static_cast<double>(table.domain_size)));
}

const FeatureTable* CountModel::find_feature(Feature f) const {
  for (const auto& table : features) {
    if (table.feature == f) return &table;
  }
  return nullptr;
}

WeightSet WeightSet::unit(LabelKind kind) {
  WeightSet w;
  w.label_kind = kind;
  w.mode = WeightMode::unit;
  w.weights = {{Feature::phi, 1.0}, {Feature::iota, 1.0}, {Feature::poi, 1.0}};
  return w;
}

double WeightSet::at(Feature f) const {
  auto it = weights.find(f);
  if (it == weights.end()) throw std::out_of_range("weight set has no weight for feature");
  return it->second;
}

namespace {

std::string label_of(const FeaturizedRecord& r, LabelKind kind) {
  switch (kind) {
    case LabelKind::poi: return r.poi;
    case LabelKind::duration: return std::to_string(r.duration_bin);
    case LabelKind::contact: return r.peer;
  }
  return {};
}

}  // namespace

CountModel fit(const std::vector<FeaturizedRecord>& records, LabelKind kind, double alpha,
               int slot_count, const DurationBins* bins) {
  if (records.empty()) throw std::invalid_argument("fit: no records");
  if (alpha <= 0) throw std::invalid_argument("fit: alpha must be positive");

  CountModel m;
  m.label_kind = kind;
  m.alpha = alpha;
  m.total = static_cast<std::int64_t>(records.size());

  m.features.push_back(FeatureTable{Feature::phi, 7, {}});
  m.features.push_back(FeatureTable{Feature::iota, slot_count, {}});
  if (kind == LabelKind::duration) {
    m.features.push_back(FeatureTable{Feature::poi, 0, {}});
  }

  for (const auto& r : records) {
    std::string cls = label_of(r, kind);
    ++m.class_counts[cls];
    ++m.features[0].counts[std::to_string(r.phi)][cls];
    ++m.features[1].counts[std::to_string(r.iota_s)][cls];
    if (kind == LabelKind::duration) {
      ++m.features[2].counts[r.poi][cls];
    }
  }
  if (kind == LabelKind::duration) {
    m.features[2].domain_size = static_cast<std::int64_t>(m.features[2].counts.size());

    DurationBins local = bins ? *bins : DurationBins{};
    m.bin_edges = local.edges();
    std::vector<Seconds> durations;
    durations.reserve(records.size());
    for (const auto& r : records) durations.push_back(r.duration_s);
    local.train(durations);
    for (const auto& [cls, n] : m.class_counts) {
      m.representatives[cls] = local.representative(std::stoi(cls));
    }
  }
  return m;
}

double kl_weight(const CountModel& model, Feature f, KlNorm norm) {
  const FeatureTable* table = model.find_feature(f);
  if (!table) throw std::invalid_argument("kl_weight: model lacks feature");
  double total = static_cast<double>(model.total);
  if (total <= 0) return 0.0;

  double avg_kl = 0.0;
  double split_info = 0.0;
  for (const auto& [value, per_class] : table->counts) {
    std::int64_t n_v = 0;
    for (const auto& [cls, n] : per_class) n_v += n;
    if (n_v == 0) continue;
    double p_v = static_cast<double>(n_v) / total;

    double kl = 0.0;
    for (const auto& [cls, n] : per_class) {
      if (n == 0) continue;  // 0·log0 = 0
      double posterior = static_cast<double>(n) / static_cast<double>(n_v);
      double prior = static_cast<double>(model.class_counts.at(cls)) / total;
      kl += posterior * std::log(posterior / prior);
    }
    avg_kl += p_v * kl;
    split_info -= p_v * std::log(p_v);
  }

  if (norm == KlNorm::plain) return std::max(0.0, avg_kl);
  if (split_info <= 0.0) return 0.0;  // single-valued feature
  return std::max(0.0, avg_kl / split_info);
}

WeightSet adaptive_weights(const CountModel& model, KlNorm norm) {
  WeightSet w;
  w.label_kind = model.label_kind;
  w.mode = WeightMode::adaptive;
  for (const auto& table : model.features) {
    w.weights[table.feature] = kl_weight(model, table.feature, norm);
  }
  return w;
}

CountModel pool_counts(const std::vector<const CountModel*>& models) {
  if (models.empty()) throw std::invalid_argument("pool_counts: no models");
  CountModel pooled;
  pooled.label_kind = models.front()->label_kind;
  pooled.alpha = models.front()->alpha;
  for (const CountModel* m : models) {
    if (m->label_kind != pooled.label_kind) {
      throw std::invalid_argument("pool_counts: mixed label kinds");
    }
    pooled.total += m->total;
    for (const auto& [cls, n] : m->class_counts) pooled.class_counts[cls] += n;
    for (const auto& table : m->features) {
      FeatureTable* target = nullptr;
      for (auto& t : pooled.features) {
        if (t.feature == table.feature) target = &t;
      }
      if (!target) {
        pooled.features.push_back(FeatureTable{table.feature, table.domain_size, {}});
        target = &pooled.features.back();
      }
      target->domain_size = std::max(target->domain_size, table.domain_size);
      for (const auto& [value, per_class] : table.counts) {
        for (const auto& [cls, n] : per_class) target->counts[value][cls] += n;
      }
    }
  }
  // Open-domain features widen under pooling.
  for (auto& table : pooled.features) {
    if (table.feature == Feature::poi) {
      table.domain_size = static_cast<std::int64_t>(table.counts.size());
    }
  }
  return pooled;
}

WeightSet shared_weights(const std::vector<const CountModel*>& models, KlNorm norm) {
  CountModel pooled = pool_counts(models);
  WeightSet w = adaptive_weights(pooled, norm);
  w.mode = WeightMode::shared;
  return w;
}

namespace {

struct Candidate {
  const std::string* label;
  double score;
  std::int64_t prior;
};

// Weighted log-space MAP scoring over every class, then top-k selection with
// the deterministic tie-break (score desc, prior count desc, label asc).
Prediction rank_classes(const CountModel& model, const WeightSet& weights,
                        const std::vector<std::pair<Feature, std::string>>& feature_values,
                        int k) {
  Prediction pred;
  pred.k_requested = k;
  if (k <= 0 || model.class_counts.empty()) return pred;

  std::vector<std::pair<std::size_t, const std::string*>> bound;
  bound.reserve(feature_values.size());
  for (const auto& [f, value] : feature_values) {
    for (std::size_t i = 0; i < model.features.size(); ++i) {
      if (model.features[i].feature == f) bound.emplace_back(i, &value);
    }
  }

  std::vector<Candidate> candidates;
  candidates.reserve(model.class_counts.size());
  for (const auto& [cls, n] : model.class_counts) {
    double score = model.log_prior(cls);
    for (const auto& [idx, value] : bound) {
      double w = weights.at(model.features[idx].feature);
      score += w * model.log_conditional(idx, *value, cls);
    }
    candidates.push_back(Candidate{&cls, score, n});
  }

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

void require_kind(const CountModel& model, LabelKind kind, const char* who) {
  if (model.label_kind != kind) {
    throw std::invalid_argument(std::string(who) + ": model has wrong label kind");
  }
}

}  // namespace

Prediction predict_poi(const CountModel& model, const WeightSet& weights,
                       const TemporalContext& ctx, int k) {
  require_kind(model, LabelKind::poi, "predict_poi");
  return rank_classes(model, weights,
                      {{Feature::phi, std::to_string(ctx.phi)},
                       {Feature::iota, std::to_string(ctx.iota)}},
                      k);
}

Prediction predict_duration(const CountModel& model, const WeightSet& weights,
                            const TemporalContext& ctx, const PoiId& poi, int k) {
  require_kind(model, LabelKind::duration, "predict_duration");
  return rank_classes(model, weights,
                      {{Feature::phi, std::to_string(ctx.phi)},
                       {Feature::iota, std::to_string(ctx.iota)},
                       {Feature::poi, poi}},
                      k);
}

Prediction predict_contacts(const CountModel& model, const WeightSet& weights,
                            const TemporalContext& ctx, int k) {
  require_kind(model, LabelKind::contact, "predict_contacts");
  return rank_classes(model, weights,
                      {{Feature::phi, std::to_string(ctx.phi)},
                       {Feature::iota, std::to_string(ctx.iota)}},
                      k);
}

}  // namespace enco
