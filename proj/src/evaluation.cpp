#include "enco/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>

#include "enco/csv.hpp"
#include "enco/parallel.hpp"

namespace enco {

const char* to_string(Task t) {
  switch (t) {
    case Task::poi: return "poi";
    case Task::duration: return "duration";
    case Task::contact: return "contact";
  }
  return "?";
}

Task task_from_string(const std::string& s) {
  if (s == "poi") return Task::poi;
  if (s == "duration") return Task::duration;
  if (s == "contact") return Task::contact;
  throw std::invalid_argument("unknown task: " + s);
}

const char* to_string(Variant v) {
  switch (v) {
    case Variant::weighted: return "weighted";
    case Variant::nbc: return "nbc";
    case Variant::gaussian_st: return "gaussian_st";
  }
  return "?";
}

Variant variant_from_string(const std::string& s) {
  if (s == "weighted") return Variant::weighted;
  if (s == "nbc") return Variant::nbc;
  if (s == "gaussian_st" || s == "gaussian") return Variant::gaussian_st;
  throw std::invalid_argument("unknown variant: " + s);
}

const char* to_string(SplitMode m) {
  return m == SplitMode::random ? "random" : "chronological";
}

SplitMode split_mode_from_string(const std::string& s) {
  if (s == "random") return SplitMode::random;
  if (s == "chronological") return SplitMode::chronological;
  throw std::invalid_argument("unknown split mode: " + s);
}

std::string variant_label(Variant v, WeightMode mode) {
  if (v != Variant::weighted) return to_string(v);
  return std::string("weighted_") + to_string(mode);
}

std::vector<int> kfold_assignment(std::size_t n, int folds, std::uint64_t seed, SplitMode mode) {
  if (folds < 2) throw std::invalid_argument("kfold: folds must be >= 2");
  if (n < static_cast<std::size_t>(folds)) {
    throw std::invalid_argument("kfold: fewer records than folds");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  if (mode == SplitMode::random) {
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
  }

  std::vector<int> fold_of(n, 0);
  std::size_t base = n / static_cast<std::size_t>(folds);
  std::size_t rem = n % static_cast<std::size_t>(folds);
  std::size_t pos = 0;
  for (int f = 0; f < folds; ++f) {
    std::size_t size = base + (static_cast<std::size_t>(f) < rem ? 1 : 0);
    for (std::size_t i = 0; i < size; ++i) fold_of[order[pos++]] = f;
  }
  return fold_of;
}

std::vector<FoldSplit> kfold_split(std::size_t n, int folds, std::uint64_t seed, SplitMode mode) {
  std::vector<int> fold_of = kfold_assignment(n, folds, seed, mode);
  std::vector<FoldSplit> out(static_cast<std::size_t>(folds));
  for (std::size_t i = 0; i < n; ++i) {
    for (int f = 0; f < folds; ++f) {
      if (fold_of[i] == f) out[static_cast<std::size_t>(f)].test.push_back(i);
      else out[static_cast<std::size_t>(f)].train.push_back(i);
    }
  }
  return out;
}

double sample_skewness(const std::vector<double>& xs) {
  std::size_t n = xs.size();
  if (n < 3) return 0.0;
  double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(n);
  double m2 = 0, m3 = 0;
  for (double x : xs) {
    double d = x - mean;
    m2 += d * d;
    m3 += d * d * d;
  }
  m2 /= static_cast<double>(n);
  m3 /= static_cast<double>(n);
  if (m2 <= 0) return 0.0;
  double g1 = m3 / std::pow(m2, 1.5);
  double nd = static_cast<double>(n);
  return g1 * std::sqrt(nd * (nd - 1.0)) / (nd - 2.0);
}

std::vector<double> skewness_filter(std::vector<double> durations) {
  while (durations.size() > 3 && std::abs(sample_skewness(durations)) > 1.0) {
    std::vector<double> sorted = durations;
    std::sort(sorted.begin(), sorted.end());
    std::size_t mid = sorted.size() / 2;
    double median = sorted.size() % 2 == 1 ? sorted[mid] : (sorted[mid - 1] + sorted[mid]) / 2.0;

    // Farthest from the median goes; the larger value wins a tie.
    std::size_t worst = 0;
    for (std::size_t i = 1; i < durations.size(); ++i) {
      double di = std::abs(durations[i] - median);
      double dw = std::abs(durations[worst] - median);
      if (di > dw || (di == dw && durations[i] > durations[worst])) worst = i;
    }
    durations.erase(durations.begin() + static_cast<std::ptrdiff_t>(worst));
  }
  return durations;
}

std::uint64_t user_seed(std::uint64_t seed, const UserId& user) {
  // FNV-1a over the id, then a splitmix64 round to decorrelate from the seed.
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : user) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::uint64_t z = seed ^ h;
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {

struct GroupInterval {
  double mean = 0;
  double sd = 0;
};

// μ_z and sample σ_z of the skewness-filtered duration group.
GroupInterval group_interval(const std::vector<double>& group) {
  std::vector<double> filtered = skewness_filter(group);
  GroupInterval gi;
  if (filtered.empty()) return gi;
  double n = static_cast<double>(filtered.size());
  gi.mean = std::accumulate(filtered.begin(), filtered.end(), 0.0) / n;
  if (filtered.size() >= 2) {
    double ss = 0;
    for (double x : filtered) ss += (x - gi.mean) * (x - gi.mean);
    gi.sd = std::sqrt(ss / (n - 1.0));
  }
  return gi;
}

// Degenerate σ=0 groups demand an exact match (to the second).
bool within_interval(double predicted_seconds, const GroupInterval& gi) {
  if (gi.sd == 0) return std::abs(predicted_seconds - gi.mean) <= 1.0;
  return predicted_seconds >= gi.mean - gi.sd && predicted_seconds <= gi.mean + gi.sd;
}

}  // namespace

bool duration_prediction_correct(double predicted_seconds, const std::vector<double>& group) {
  return within_interval(predicted_seconds, group_interval(group));
}

namespace {

struct GroupKey {
  int phi;
  int iota;
  PoiId poi;
  bool operator<(const GroupKey& o) const {
    return std::tie(phi, iota, poi) < std::tie(o.phi, o.iota, o.poi);
  }
};

struct UserFoldState {
  bool usable = false;
  std::optional<CountModel> primary;    // task's label kind
  std::optional<CountModel> poi_chain;  // duration task: PoI model for chaining
  std::optional<GaussianStModel> gauss;
  WeightSet weights;
  WeightSet poi_weights;
  std::vector<std::size_t> test;
};

LabelKind kind_of(Task task) {
  switch (task) {
    case Task::poi: return LabelKind::poi;
    case Task::duration: return LabelKind::duration;
    case Task::contact: return LabelKind::contact;
  }
  return LabelKind::poi;
}

bool in_top_k(const Prediction& pred, const std::string& truth, int k) {
  int limit = std::min<int>(k, static_cast<int>(pred.ranked.size()));
  for (int i = 0; i < limit; ++i) {
    if (pred.ranked[static_cast<std::size_t>(i)].label == truth) return true;
  }
  return false;
}

}  // namespace

std::vector<UserAccuracy> evaluate_task(
    const std::vector<std::pair<UserId, std::vector<FeaturizedRecord>>>& users, Task task,
    Variant variant, const EvalConfig& cfg) {
  if (cfg.folds < 2) throw std::invalid_argument("evaluate: folds must be >= 2");
  if (cfg.min_records < cfg.folds) {
    throw std::invalid_argument("evaluate: min_records must be >= folds");
  }
  if (cfg.ks.empty()) throw std::invalid_argument("evaluate: no ks");
  if (variant == Variant::gaussian_st && task != Task::poi) {
    throw std::invalid_argument("evaluate: gaussian_st baseline only covers the poi task");
  }

  std::vector<int> ks = cfg.ks;
  std::sort(ks.begin(), ks.end());
  int max_k = ks.back();

  struct Gated {
    const UserId* user;
    const std::vector<FeaturizedRecord>* records;
    std::vector<int> fold_of;
  };
  std::vector<Gated> gated;
  for (const auto& [user, records] : users) {
    if (records.size() < static_cast<std::size_t>(cfg.min_records)) continue;
    gated.push_back({&user, &records,
                     kfold_assignment(records.size(), cfg.folds, user_seed(cfg.seed, user),
                                      cfg.split_mode)});
  }
  if (gated.empty()) return {};

  std::size_t nu = gated.size();
  std::vector<std::vector<double>> acc_sum(nu, std::vector<double>(ks.size(), 0.0));
  std::vector<int> folds_counted(nu, 0);
  std::vector<int> n_test_total(nu, 0);

  for (int f = 0; f < cfg.folds; ++f) {
    std::vector<UserFoldState> state(nu);

    parallel_for(nu, cfg.threads, [&](std::size_t u) {
      const auto& g = gated[u];
      std::vector<FeaturizedRecord> train;
      auto& st = state[u];
      for (std::size_t i = 0; i < g.records->size(); ++i) {
        if (g.fold_of[i] == f) st.test.push_back(i);
        else train.push_back((*g.records)[i]);
      }
      if (st.test.empty() || train.empty()) {
        std::cerr << "warning: user " << *g.user << " fold " << f
                  << " has an empty side, skipping fold\n";
        return;
      }
      int slot_count = slots_per_day(cfg.slot_hours);
      if (variant == Variant::gaussian_st) {
        st.gauss = fit_gaussian_st(train, cfg.slot_hours);
      } else {
        st.primary = fit(train, kind_of(task), cfg.alpha, slot_count, &cfg.bins);
        if (task == Task::duration) {
          st.poi_chain = fit(train, LabelKind::poi, cfg.alpha, slot_count);
        }
      }
      st.usable = true;
    });

    if (variant == Variant::weighted) {
      if (cfg.weight_mode == WeightMode::shared) {
        std::vector<const CountModel*> primaries, chains;
        for (const auto& st : state) {
          if (!st.usable) continue;
          primaries.push_back(&*st.primary);
          if (st.poi_chain) chains.push_back(&*st.poi_chain);
        }
        if (!primaries.empty()) {
          WeightSet shared = shared_weights(primaries, cfg.kl_norm);
          WeightSet shared_poi =
              chains.empty() ? WeightSet::unit(LabelKind::poi) : shared_weights(chains, cfg.kl_norm);
          for (auto& st : state) {
            if (!st.usable) continue;
            st.weights = shared;
            st.poi_weights = shared_poi;
          }
        }
      } else if (cfg.weight_mode == WeightMode::adaptive) {
        parallel_for(nu, cfg.threads, [&](std::size_t u) {
          auto& st = state[u];
          if (!st.usable) return;
          st.weights = adaptive_weights(*st.primary, cfg.kl_norm);
          if (st.poi_chain) st.poi_weights = adaptive_weights(*st.poi_chain, cfg.kl_norm);
        });
      } else {
        for (auto& st : state) {
          if (!st.usable) continue;
          st.weights = WeightSet::unit(kind_of(task));
          st.poi_weights = WeightSet::unit(LabelKind::poi);
        }
      }
    }

    parallel_for(nu, cfg.threads, [&](std::size_t u) {
      auto& st = state[u];
      if (!st.usable) return;
      const auto& records = *gated[u].records;

      // Duration rule: μ±σ groups over the test fold per (φ, ι, PoI).
      std::map<GroupKey, GroupInterval> groups;
      if (task == Task::duration) {
        std::map<GroupKey, std::vector<double>> raw;
        for (std::size_t i : st.test) {
          const auto& r = records[i];
          raw[GroupKey{r.phi, r.iota_s, r.poi}].push_back(static_cast<double>(r.duration_s));
        }
        for (const auto& [key, sample] : raw) groups[key] = group_interval(sample);
      }

      std::vector<int> hits(ks.size(), 0);
      for (std::size_t i : st.test) {
        const auto& r = records[i];
        TemporalContext ctx{r.phi, r.iota_s};

        if (task == Task::duration) {
          PoiId chained = r.poi;
          if (!cfg.duration_chain_on_true_poi) {
            Prediction top_poi = variant == Variant::weighted
                                     ? predict_poi(*st.poi_chain, st.poi_weights, ctx, 1)
                                     : predict_nbc(*st.poi_chain, ctx, 1);
            if (!top_poi.ranked.empty()) chained = top_poi.ranked.front().label;
          }
          Prediction pred = variant == Variant::weighted
                                ? predict_duration(*st.primary, st.weights, ctx, chained, max_k)
                                : predict_nbc_duration(*st.primary, ctx, chained, max_k);
          const auto& interval = groups.at(GroupKey{r.phi, r.iota_s, r.poi});
          for (std::size_t ki = 0; ki < ks.size(); ++ki) {
            int limit = std::min<int>(ks[ki], static_cast<int>(pred.ranked.size()));
            bool ok = false;
            for (int j = 0; j < limit && !ok; ++j) {
              double rep = st.primary->representatives.at(pred.ranked[static_cast<std::size_t>(j)].label);
              ok = within_interval(rep, interval);
            }
            hits[ki] += ok ? 1 : 0;
          }
          continue;
        }

        Prediction pred;
        if (variant == Variant::gaussian_st) {
          pred = predict_gaussian_st(*st.gauss, ctx, cfg.slot_hours, max_k);
        } else if (variant == Variant::weighted) {
          pred = task == Task::poi ? predict_poi(*st.primary, st.weights, ctx, max_k)
                                   : predict_contacts(*st.primary, st.weights, ctx, max_k);
        } else {
          pred = task == Task::poi ? predict_nbc(*st.primary, ctx, max_k)
                                   : predict_nbc_contacts(*st.primary, ctx, max_k);
        }
        const std::string& truth = task == Task::poi ? r.poi : r.peer;
        for (std::size_t ki = 0; ki < ks.size(); ++ki) {
          hits[ki] += in_top_k(pred, truth, ks[ki]) ? 1 : 0;
        }
      }

      for (std::size_t ki = 0; ki < ks.size(); ++ki) {
        acc_sum[u][ki] += static_cast<double>(hits[ki]) / static_cast<double>(st.test.size());
      }
      folds_counted[u] += 1;
      n_test_total[u] += static_cast<int>(st.test.size());
    });
  }

  std::string label = variant_label(variant, cfg.weight_mode);
  std::vector<UserAccuracy> out;
  out.reserve(nu * ks.size());
  for (std::size_t u = 0; u < nu; ++u) {
    if (folds_counted[u] == 0) continue;
    double prev = -1.0;
    for (std::size_t ki = 0; ki < ks.size(); ++ki) {
      double acc = acc_sum[u][ki] / static_cast<double>(folds_counted[u]);
      if (acc + 1e-12 < prev) {
        throw std::logic_error("top-k accuracy monotonicity violated for user " + *gated[u].user);
      }
      prev = acc;
      out.push_back(UserAccuracy{*gated[u].user, task, label, ks[ki], acc, n_test_total[u]});
    }
  }
  return out;
}

AccuracyReport accuracy_report(const std::vector<UserAccuracy>& rows) {
  if (rows.empty()) throw std::invalid_argument("accuracy_report: no rows");
  AccuracyReport report;
  for (const auto& r : rows) {
    report[{to_string(r.task), r.variant, r.k}].sorted_accuracies.push_back(r.accuracy);
  }
  for (auto& [key, summary] : report) {
    auto& a = summary.sorted_accuracies;
    std::sort(a.begin(), a.end());
    std::size_t n = a.size();
    summary.median = n % 2 == 1 ? a[n / 2] : (a[n / 2 - 1] + a[n / 2]) / 2.0;
    auto frac_gt = [&](double t) {
      std::size_t c = 0;
      for (double x : a) c += x > t ? 1 : 0;
      return static_cast<double>(c) / static_cast<double>(n);
    };
    summary.frac_gt_50 = frac_gt(0.5);
    summary.frac_gt_70 = frac_gt(0.7);
    summary.frac_gt_80 = frac_gt(0.8);
  }
  return report;
}

namespace {

std::string fmt(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", value);
  return buf;
}

}  // namespace

void write_results_csv(std::ostream& out, const std::vector<UserAccuracy>& rows) {
  csv::write_row(out, {"user", "task", "variant", "k", "n_test", "accuracy"});
  for (const auto& r : rows) {
    csv::write_row(out, {r.user, to_string(r.task), r.variant, std::to_string(r.k),
                         std::to_string(r.n_test), fmt(r.accuracy)});
  }
}

std::vector<UserAccuracy> read_results_csv(std::istream& in) {
  csv::Reader reader(in);
  std::size_t c_user = reader.require_column("user");
  std::size_t c_task = reader.require_column("task");
  std::size_t c_variant = reader.require_column("variant");
  std::size_t c_k = reader.require_column("k");
  std::size_t c_n = reader.require_column("n_test");
  std::size_t c_acc = reader.require_column("accuracy");

  std::vector<UserAccuracy> rows;
  std::vector<std::string> f;
  while (reader.next(f)) {
    if (f.size() != reader.header().size()) {
      throw std::runtime_error("results csv: malformed row");
    }
    UserAccuracy r;
    r.user = f[c_user];
    r.task = task_from_string(f[c_task]);
    r.variant = f[c_variant];
    r.k = static_cast<int>(csv::parse_int(f[c_k]).value());
    r.n_test = static_cast<int>(csv::parse_int(f[c_n]).value());
    r.accuracy = csv::parse_double(f[c_acc]).value();
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_distribution_csv(std::ostream& out, const AccuracyReport& report) {
  csv::write_row(out, {"task", "variant", "k", "quantile", "accuracy"});
  for (const auto& [key, summary] : report) {
    const auto& [task, variant, k] = key;
    std::string ks = std::to_string(k);
    std::size_t n = summary.sorted_accuracies.size();
    for (std::size_t i = 0; i < n; ++i) {
      double q = static_cast<double>(i + 1) / static_cast<double>(n);
      csv::write_row(out, {task, variant, ks, fmt(q), fmt(summary.sorted_accuracies[i])});
    }
    csv::write_row(out, {task, variant, ks, "median", fmt(summary.median)});
    csv::write_row(out, {task, variant, ks, "frac_gt_0.5", fmt(summary.frac_gt_50)});
    csv::write_row(out, {task, variant, ks, "frac_gt_0.7", fmt(summary.frac_gt_70)});
    csv::write_row(out, {task, variant, ks, "frac_gt_0.8", fmt(summary.frac_gt_80)});
  }
}

}  // namespace enco
