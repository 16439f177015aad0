// enco: encounter/colocation trace processing and prediction pipeline.
//
// Stages read their predecessor's CSV artifacts and write their own:
//   synth -> ingest -> extract -> featurize -> train -> predict
//                                          \-> evaluate -> report

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "enco/artifacts.hpp"
#include "enco/baselines.hpp"
#include "enco/bayes.hpp"
#include "enco/evaluation.hpp"
#include "enco/events.hpp"
#include "enco/featurize.hpp"
#include "enco/ingestion.hpp"
#include "enco/model_io.hpp"
#include "enco/parallel.hpp"
#include "enco/synthetic.hpp"
#include "enco/timezone.hpp"

namespace fs = std::filesystem;
using namespace enco;

namespace {

std::ifstream open_input(const std::string& path, const std::string& producer) {
  if (!fs::exists(path)) {
    throw std::runtime_error("input not found: " + path + " (run `enco " + producer +
                             "` first)");
  }
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

std::vector<Seconds> parse_edges(const std::string& csv_list) {
  std::vector<Seconds> edges;
  std::stringstream ss(csv_list);
  std::string item;
  while (std::getline(ss, item, ',')) edges.push_back(std::stoll(item));
  return edges;
}

std::vector<int> parse_ks(const std::string& csv_list) {
  std::vector<int> ks;
  std::stringstream ss(csv_list);
  std::string item;
  while (std::getline(ss, item, ',')) ks.push_back(std::stoi(item));
  return ks;
}

std::vector<std::string> split_list(const std::string& csv_list) {
  std::vector<std::string> items;
  std::stringstream ss(csv_list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

// Rewrites `--config FILE` into explicit `--key=value` args appended after
// the rest, skipping keys the command line already sets. Lines are
// `key = value`, blank, or # comments.
void expand_config_args(std::vector<std::string>& args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return;
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);

  auto trim = [](std::string s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    std::size_t e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
  };

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::size_t eq = t.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": expected key=value");
    }
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (key.empty()) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": empty key");
    }
    std::string flag = "--" + key;
    bool already_set = false;
    for (const auto& a : args) {
      if (a == flag || a.rfind(flag + "=", 0) == 0) already_set = true;
    }
    if (!already_set) args.push_back(flag + "=" + value);
  }
}

// Options shared by several stages; overridable via ENCO_-prefixed env vars.
struct Common {
  std::string timezone = "UTC";
  int slot_hours = 2;
  int threads = 0;  // 0 = hardware concurrency
  std::uint64_t seed = 0;
};

void add_common(CLI::App* cmd, Common& common) {
  cmd->add_option("--timezone", common.timezone, "Fixed-offset dataset timezone, e.g. UTC+01:00")
      ->envname("ENCO_TIMEZONE")
      ->capture_default_str();
  cmd->add_option("--slot-hours", common.slot_hours, "Day time slot length H (must divide 24)")
      ->envname("ENCO_SLOT_HOURS")
      ->capture_default_str();
  cmd->add_option("--threads", common.threads, "Worker threads (0 = all cores)")
      ->envname("ENCO_THREADS")
      ->capture_default_str();
  cmd->add_option("--seed", common.seed, "RNG seed for splits and generators")
      ->envname("ENCO_SEED")
      ->capture_default_str();
}

int run_ingest(const std::string& kind, const std::string& input, const std::string& output,
               Seconds min_dwell, Seconds merge_gap, Seconds t_h) {
  auto in = open_input(input, "synth");
  auto out = open_output(output);
  if (kind == "wifi") {
    ParseStats stats;
    auto sessions = parse_wifi_log(in, stats);
    BuildVisitStats build{};
    auto visits = build_visits(std::move(sessions), min_dwell, merge_gap, &build);
    write_intervals_csv(out, visits);
    std::cout << "[ingest] rows=" << stats.rows << " parsed=" << stats.emitted
              << " skipped=" << stats.skipped << " merged=" << build.merged_gaps
              << " dropped_unpaired=" << build.dropped_unpaired
              << " dropped_short=" << build.dropped_short << " visits=" << visits.size() << "\n";
  } else if (kind == "cdr") {
    ParseStats stats;
    auto activities = parse_cdr_log(in, stats);
    auto presence = build_presence(std::move(activities), t_h);
    write_intervals_csv(out, presence);
    std::cout << "[ingest] rows=" << stats.rows << " parsed=" << stats.emitted
              << " skipped=" << stats.skipped << " intervals=" << presence.size() << "\n";
  } else {
    throw std::runtime_error("ingest: --kind must be wifi or cdr");
  }
  return 0;
}

int run_extract(const std::string& kind, const std::string& input, const std::string& output,
                int threads) {
  auto in = open_input(input, "ingest");
  auto out = open_output(output);
  std::vector<ProximityEvent> events;
  std::size_t intervals_in = 0;
  if (kind == "encounter") {
    auto visits = read_visits_csv(in);
    intervals_in = visits.size();
    events = extract_encounters(visits, threads);
  } else if (kind == "colocation") {
    auto presence = read_presence_csv(in);
    intervals_in = presence.size();
    events = extract_colocations(presence, threads);
  } else {
    throw std::runtime_error("extract: --kind must be encounter or colocation");
  }
  write_events_csv(out, events);
  std::cout << "[extract] intervals=" << intervals_in << " events=" << events.size() << "\n";
  return 0;
}

int run_featurize(const std::string& input, const std::string& output, const Common& common,
                  const std::string& edges) {
  auto in = open_input(input, "extract");
  auto events = read_events_csv(in, EventKind::encounter);
  DurationBins bins = edges.empty() ? DurationBins{} : DurationBins{parse_edges(edges)};
  Timezone tz = Timezone::parse(common.timezone);
  auto records = featurize_events(events, common.slot_hours, tz, bins);
  auto out = open_output(output);
  write_features_csv(out, records);
  std::cout << "[featurize] events=" << events.size() << " records=" << records.size()
            << " tz=" << tz.name() << " H=" << common.slot_hours << "\n";
  return 0;
}

int run_train(const std::string& input, const std::string& output, const Common& common,
              double alpha, const std::string& weights_mode, const std::string& kl_norm,
              int min_records, const std::string& edges, bool with_gaussian) {
  auto in = open_input(input, "featurize");
  auto records = read_features_csv(in);
  auto users = group_by_user(records);

  WeightMode mode = weight_mode_from_string(weights_mode);
  KlNorm norm = kl_norm == "plain" ? KlNorm::plain : KlNorm::splitinfo;
  DurationBins bins = edges.empty() ? DurationBins{} : DurationBins{parse_edges(edges)};
  int slot_count = slots_per_day(common.slot_hours);

  std::vector<std::vector<UserModel>> fitted(users.size());
  std::size_t gated_out = 0;
  for (const auto& [user, recs] : users) {
    if (recs.size() < static_cast<std::size_t>(min_records)) ++gated_out;
  }

  parallel_for(users.size(), common.threads, [&](std::size_t u) {
    const auto& [user, recs] = users[u];
    if (recs.size() < static_cast<std::size_t>(min_records)) return;
    for (LabelKind kind : {LabelKind::poi, LabelKind::duration, LabelKind::contact}) {
      UserModel um;
      um.user = user;
      um.model = fit(recs, kind, alpha, slot_count, &bins);
      um.weights = mode == WeightMode::unit ? WeightSet::unit(kind)
                                            : adaptive_weights(um.model, norm);
      fitted[u].push_back(std::move(um));
    }
    if (with_gaussian) {
      UserModel um;
      um.user = user;
      um.gaussian = fit_gaussian_st(recs, common.slot_hours);
      fitted[u].push_back(std::move(um));
    }
  });

  if (mode == WeightMode::shared) {
    // Replace the per-user weights with the pooled weights per label kind.
    for (std::size_t k = 0; k < 3; ++k) {
      std::vector<const CountModel*> pool;
      for (const auto& pu : fitted) {
        if (pu.size() >= 3) pool.push_back(&pu[k].model);
      }
      if (pool.empty()) continue;
      WeightSet shared = shared_weights(pool, norm);
      for (auto& pu : fitted) {
        if (pu.size() >= 3) pu[k].weights = shared;
      }
    }
  }

  std::vector<UserModel> all;
  for (auto& pu : fitted) {
    for (auto& um : pu) all.push_back(std::move(um));
  }
  auto out = open_output(output);
  save_models_jsonl(out, all);
  std::cout << "[train] users=" << users.size() << " gated_out=" << gated_out
            << " models=" << all.size() << " weights=" << weights_mode << "\n";
  return 0;
}

int run_predict(const std::string& models_path, const std::string& user, int phi, int iota,
                const std::string& task, int k, const std::string& poi,
                const std::string& variant, int slot_hours) {
  auto in = open_input(models_path, "train");
  auto models = load_models_jsonl(in);

  LabelKind kind = label_kind_from_string(task);
  const UserModel* target = nullptr;
  const UserModel* poi_model = nullptr;
  const UserModel* gaussian = nullptr;
  for (const auto& um : models) {
    if (um.user != user) continue;
    if (um.gaussian) {
      gaussian = &um;
      continue;
    }
    if (um.model.label_kind == kind) target = &um;
    if (um.model.label_kind == LabelKind::poi) poi_model = &um;
  }

  TemporalContext ctx{phi, iota};
  if (variant == "gaussian" || variant == "gaussian_st") {
    if (kind != LabelKind::poi) {
      throw std::runtime_error("the gaussian_st baseline only answers the poi task");
    }
    if (!gaussian) {
      throw std::runtime_error("no gaussian_st model for user " + user +
                               " (train with --gaussian)");
    }
    Prediction pred = predict_gaussian_st(*gaussian->gaussian, ctx, slot_hours, k);
    for (const auto& r : pred.ranked) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.6f", r.log_score);
      std::cout << r.label << " log_score=" << buf << "\n";
    }
    if (pred.ranked.empty()) std::cout << "# no candidates\n";
    return 0;
  }

  if (!target) {
    throw std::runtime_error("no " + task + " model for user " + user +
                             " (check the model file or retrain)");
  }

  Prediction pred;
  if (kind == LabelKind::poi) {
    pred = predict_poi(target->model, target->weights, ctx, k);
  } else if (kind == LabelKind::contact) {
    pred = predict_contacts(target->model, target->weights, ctx, k);
  } else {
    PoiId chained = poi;
    if (chained.empty()) {
      if (!poi_model) throw std::runtime_error("duration prediction needs a poi model to chain");
      Prediction top = predict_poi(poi_model->model, poi_model->weights, ctx, 1);
      if (top.ranked.empty()) throw std::runtime_error("poi model returned no candidates");
      chained = top.ranked.front().label;
      std::cout << "# chained poi: " << chained << "\n";
    }
    pred = predict_duration(target->model, target->weights, ctx, chained, k);
  }

  for (const auto& r : pred.ranked) {
    std::cout << r.label;
    if (kind == LabelKind::duration) {
      std::cout << " (" << target->model.representatives.at(r.label) << " s)";
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", r.log_score);
    std::cout << " log_score=" << buf << "\n";
  }
  if (pred.ranked.empty()) std::cout << "# no candidates\n";
  return 0;
}

int run_evaluate(const std::string& input, const std::string& output, const Common& common,
                 const std::string& kind, const std::string& tasks_list,
                 const std::string& variants_list, EvalConfig cfg, int min_records_flag,
                 const std::string& weights_mode, const std::string& kl_norm,
                 const std::string& split, const std::string& ks_list,
                 const std::string& edges, bool duration_true_poi) {
  auto in = open_input(input, "featurize");
  auto records = read_features_csv(in);
  auto users = group_by_user(records);

  cfg.slot_hours = common.slot_hours;
  cfg.threads = common.threads;
  cfg.seed = common.seed;
  cfg.weight_mode = weight_mode_from_string(weights_mode);
  cfg.kl_norm = kl_norm == "plain" ? KlNorm::plain : KlNorm::splitinfo;
  cfg.split_mode = split_mode_from_string(split);
  cfg.ks = parse_ks(ks_list);
  cfg.duration_chain_on_true_poi = duration_true_poi;
  if (!edges.empty()) cfg.bins = DurationBins{parse_edges(edges)};
  // Gate defaults per trace kind; an explicit flag wins.
  cfg.min_records = min_records_flag > 0 ? min_records_flag : (kind == "colocation" ? 350 : 75);

  std::vector<UserAccuracy> all;
  for (const std::string& task_name : split_list(tasks_list)) {
    Task task = task_from_string(task_name);
    for (const std::string& variant_name : split_list(variants_list)) {
      Variant variant = variant_from_string(variant_name);
      if (variant == Variant::gaussian_st && task != Task::poi) continue;
      auto rows = evaluate_task(users, task, variant, cfg);
      std::cout << "[evaluate] task=" << task_name
                << " variant=" << variant_label(variant, cfg.weight_mode)
                << " users=" << rows.size() / cfg.ks.size() << "\n";
      all.insert(all.end(), rows.begin(), rows.end());
    }
  }

  auto out = open_output(output);
  out << "# enco evaluate: split=" << to_string(cfg.split_mode) << " folds=" << cfg.folds
      << " seed=" << cfg.seed << " min_records=" << cfg.min_records << " alpha=" << cfg.alpha
      << " weights=" << weights_mode << " kl_norm=" << kl_norm << "\n";
  write_results_csv(out, all);
  std::cout << "[evaluate] users_in=" << users.size() << " result_rows=" << all.size() << "\n";
  return 0;
}

int run_report(const std::string& input, const std::string& output) {
  auto in = open_input(input, "evaluate");
  // Carry the evaluate stage's provenance comment through to the report.
  std::string provenance;
  if (in.peek() == '#') std::getline(in, provenance);
  in.seekg(0);
  auto rows = read_results_csv(in);
  if (rows.empty()) throw std::runtime_error("report: no result rows in " + input);
  auto report = accuracy_report(rows);
  auto out = open_output(output);
  if (!provenance.empty()) out << provenance << "\n";
  write_distribution_csv(out, report);
  std::cout << "[report] rows=" << rows.size() << " groups=" << report.size() << "\n";
  return 0;
}

int run_synth(const std::string& output, const std::string& truth_path, const Common& common,
              int users, int pois, int weeks, int slots_per_pair, double noise,
              bool weekend_conflict) {
  ScheduleSpec spec =
      weekly_plan(users, pois, weeks, slots_per_pair, noise, weekend_conflict, common.seed);
  Timezone tz = Timezone::parse(common.timezone);
  SyntheticTrace trace = generate(spec, tz, common.slot_hours, common.threads);

  auto sessions = to_wifi_sessions(trace.visits);
  auto out = open_output(output);
  write_wifi_csv(out, sessions);
  if (!truth_path.empty()) {
    auto truth_out = open_output(truth_path);
    write_features_csv(truth_out, trace.truth);
  }
  std::cout << "[synth] users=" << users << " meetings=" << trace.truth.size() / 2
            << " sessions=" << sessions.size() << " noise=" << noise << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"encounter/colocation trace processing and prediction"};
  app.require_subcommand(1);

  Common common;

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Parse raw logs into visit/presence intervals");
  std::string ingest_kind = "wifi", ingest_in, ingest_out = "intervals.csv";
  Seconds min_dwell = 900, merge_gap = 60, t_h = 900;
  ingest->add_option("--kind", ingest_kind, "wifi | cdr")->capture_default_str();
  ingest->add_option("--input", ingest_in, "Raw log CSV")->required();
  ingest->add_option("--output", ingest_out, "Interval CSV")->capture_default_str();
  ingest->add_option("--min-dwell", min_dwell, "Minimum visit dwell in seconds (WiFi)")
      ->envname("ENCO_MIN_DWELL")
      ->capture_default_str();
  ingest->add_option("--merge-gap", merge_gap, "Ping-pong merge gap in seconds (WiFi)")
      ->envname("ENCO_MERGE_GAP")
      ->capture_default_str();
  ingest->add_option("--t-h", t_h, "Presence half-window T_h in seconds (CDR)")
      ->envname("ENCO_T_H")
      ->capture_default_str();
  add_common(ingest, common);

  // extract
  auto* extract = app.add_subcommand("extract", "Extract pairwise overlap events");
  std::string extract_kind = "encounter", extract_in = "intervals.csv",
              extract_out = "events.csv";
  extract->add_option("--kind", extract_kind, "encounter | colocation")->capture_default_str();
  extract->add_option("--input", extract_in, "Interval CSV")->capture_default_str();
  extract->add_option("--output", extract_out, "Event CSV")->capture_default_str();
  add_common(extract, common);

  // featurize
  auto* featurize = app.add_subcommand("featurize", "Map events to temporal feature records");
  std::string feat_in = "events.csv", feat_out = "features.csv", bin_edges;
  featurize->add_option("--input", feat_in, "Event CSV")->capture_default_str();
  featurize->add_option("--output", feat_out, "Feature CSV")->capture_default_str();
  featurize->add_option("--bin-edges", bin_edges,
                        "Comma-separated duration bin edges in seconds (starting at 0)");
  add_common(featurize, common);

  // train
  auto* train = app.add_subcommand("train", "Fit per-user count models and weights");
  std::string train_in = "features.csv", train_out = "models.jsonl";
  std::string weights_mode = "shared", kl_norm = "splitinfo";
  double alpha = 1.0;
  int train_min_records = 1;
  train->add_option("--input", train_in, "Feature CSV")->capture_default_str();
  train->add_option("--output", train_out, "Model JSONL")->capture_default_str();
  train->add_option("--alpha", alpha, "Laplace smoothing pseudo-count")
      ->envname("ENCO_ALPHA")
      ->capture_default_str();
  train->add_option("--weights", weights_mode, "shared | adaptive | unit")
      ->envname("ENCO_WEIGHTS")
      ->capture_default_str();
  train->add_option("--kl-norm", kl_norm, "splitinfo | plain")
      ->envname("ENCO_KL_NORM")
      ->capture_default_str();
  train->add_option("--min-records", train_min_records, "Skip users with fewer records")
      ->capture_default_str();
  train->add_option("--bin-edges", bin_edges, "Duration bin edges");
  bool train_gaussian = false;
  train->add_flag("--gaussian", train_gaussian, "Also fit the gaussian_st baseline per user");
  add_common(train, common);

  // predict
  auto* predict = app.add_subcommand("predict", "Query a trained model");
  std::string models_path = "models.jsonl", predict_user, predict_task = "poi", predict_poi_id;
  int predict_phi = 1, predict_iota = 0, predict_k = 3;
  predict->add_option("--models", models_path, "Model JSONL")->capture_default_str();
  predict->add_option("--user", predict_user, "User id")->required();
  predict->add_option("--phi", predict_phi, "Day of week, Monday=1")->required();
  predict->add_option("--iota", predict_iota, "Day time slot")->required();
  predict->add_option("--task", predict_task, "poi | duration | contact")->capture_default_str();
  predict->add_option("--k", predict_k, "Top-k size")->capture_default_str();
  predict->add_option("--poi", predict_poi_id, "PoI for duration (default: chained top-1)");
  std::string predict_variant = "weighted";
  predict->add_option("--variant", predict_variant, "weighted | gaussian")
      ->capture_default_str();
  int predict_slot_hours = 2;
  predict->add_option("--slot-hours", predict_slot_hours,
                      "Slot length H (gaussian baseline hour mapping)")
      ->envname("ENCO_SLOT_HOURS")
      ->capture_default_str();

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "Cross-validated accuracy per user");
  std::string eval_in = "features.csv", eval_out = "results.csv";
  std::string eval_kind = "encounter", tasks = "poi,duration,contact",
              variants = "weighted,nbc", split = "random", ks = "1,2,3";
  EvalConfig cfg;
  int min_records_flag = 0;
  bool duration_true_poi = false;
  evaluate->add_option("--input", eval_in, "Feature CSV")->capture_default_str();
  evaluate->add_option("--output", eval_out, "Per-user results CSV")->capture_default_str();
  evaluate->add_option("--kind", eval_kind, "encounter | colocation (sets the default gate)")
      ->capture_default_str();
  evaluate->add_option("--tasks", tasks, "Comma list of poi,duration,contact")
      ->capture_default_str();
  evaluate->add_option("--variants,--variant", variants, "Comma list of weighted,nbc,gaussian")
      ->capture_default_str();
  evaluate->add_option("--folds", cfg.folds, "Cross-validation folds")
      ->envname("ENCO_FOLDS")
      ->capture_default_str();
  evaluate->add_option("--ks", ks, "Comma list of top-k sizes")
      ->envname("ENCO_KS")
      ->capture_default_str();
  evaluate->add_option("--min-records", min_records_flag,
                       "Per-user record gate (0 = kind default: 75 encounter / 350 colocation)")
      ->envname("ENCO_MIN_RECORDS")
      ->capture_default_str();
  evaluate->add_option("--split", split, "random | chronological")
      ->envname("ENCO_SPLIT")
      ->capture_default_str();
  evaluate->add_option("--alpha", cfg.alpha, "Laplace smoothing pseudo-count")
      ->envname("ENCO_ALPHA")
      ->capture_default_str();
  evaluate->add_option("--weights", weights_mode, "shared | adaptive | unit")
      ->envname("ENCO_WEIGHTS")
      ->capture_default_str();
  evaluate->add_option("--kl-norm", kl_norm, "splitinfo | plain")
      ->envname("ENCO_KL_NORM")
      ->capture_default_str();
  evaluate->add_flag("--duration-true-poi", duration_true_poi,
                     "Condition duration on the true PoI (ablation)");
  evaluate->add_option("--bin-edges", bin_edges, "Duration bin edges");
  add_common(evaluate, common);

  // report
  auto* report = app.add_subcommand("report", "Accuracy distribution report");
  std::string report_in = "results.csv", report_out = "distribution.csv";
  report->add_option("--input", report_in, "Per-user results CSV")->capture_default_str();
  report->add_option("--output", report_out, "Distribution CSV")->capture_default_str();

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a planted synthetic trace");
  std::string synth_out = "wifi_sessions.csv", truth_out;
  int synth_users = 10, synth_pois = 8, synth_weeks = 6, synth_slots = 6;
  double noise = 0.0;
  bool weekend_conflict = false;
  synth->add_option("--output", synth_out, "WiFi session CSV")->capture_default_str();
  synth->add_option("--truth", truth_out, "Ground-truth feature CSV (optional)");
  synth->add_option("--users", synth_users, "User count")->capture_default_str();
  synth->add_option("--pois", synth_pois, "PoI count")->capture_default_str();
  synth->add_option("--weeks", synth_weeks, "Weeks of trace")->capture_default_str();
  synth->add_option("--slots-per-pair", synth_slots, "Weekly meetings per pair")
      ->capture_default_str();
  synth->add_option("--noise", noise, "Meeting corruption probability")->capture_default_str();
  synth->add_flag("--weekend-conflict", weekend_conflict,
                  "Plant weekday/weekend PoI conflicts per slot");
  add_common(synth, common);

  // Flat key=value config (e.g. `min-records=30`), usable on any stage;
  // explicit flags override config values, config overrides env vars.
  std::string config_path;
  for (CLI::App* sub : app.get_subcommands([](const CLI::App*) { return true; })) {
    sub->add_option("--config", config_path, "Flat key=value config file; flags override");
  }

  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    expand_config_args(args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  std::vector<const char*> argv2;
  argv2.push_back(argv[0]);
  for (const auto& a : args) argv2.push_back(a.c_str());

  CLI11_PARSE(app, static_cast<int>(argv2.size()), argv2.data());

  try {
    if (ingest->parsed()) {
      return run_ingest(ingest_kind, ingest_in, ingest_out, min_dwell, merge_gap, t_h);
    }
    if (extract->parsed()) {
      return run_extract(extract_kind, extract_in, extract_out, common.threads);
    }
    if (featurize->parsed()) return run_featurize(feat_in, feat_out, common, bin_edges);
    if (train->parsed()) {
      return run_train(train_in, train_out, common, alpha, weights_mode, kl_norm,
                       train_min_records, bin_edges, train_gaussian);
    }
    if (predict->parsed()) {
      return run_predict(models_path, predict_user, predict_phi, predict_iota, predict_task,
                         predict_k, predict_poi_id, predict_variant, predict_slot_hours);
    }
    if (evaluate->parsed()) {
      return run_evaluate(eval_in, eval_out, common, eval_kind, tasks, variants, cfg,
                          min_records_flag, weights_mode, kl_norm, split, ks, bin_edges,
                          duration_true_poi);
    }
    if (report->parsed()) return run_report(report_in, report_out);
    if (synth->parsed()) {
      return run_synth(synth_out, truth_out, common, synth_users, synth_pois, synth_weeks,
                       synth_slots, noise, weekend_conflict);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
