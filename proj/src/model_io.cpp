#include "enco/model_io.hpp"

#include <json.hpp>

#include <stdexcept>

namespace enco {

namespace {

using nlohmann::json;

json feature_to_json(const FeatureTable& table) {
  json counts = json::object();
  for (const auto& [value, per_class] : table.counts) {
    json inner = json::object();
    for (const auto& [cls, n] : per_class) inner[cls] = n;
    counts[value] = std::move(inner);
  }
  return json{{"name", feature_name(table.feature)},
              {"domain_size", table.domain_size},
              {"counts", std::move(counts)}};
}

FeatureTable feature_from_json(const json& j) {
  FeatureTable table;
  table.feature = feature_from_name(j.at("name").get<std::string>());
  table.domain_size = j.at("domain_size").get<std::int64_t>();
  for (const auto& [value, inner] : j.at("counts").items()) {
    for (const auto& [cls, n] : inner.items()) {
      table.counts[value][cls] = n.get<std::int64_t>();
    }
  }
  return table;
}

}  // namespace

void save_models_jsonl(std::ostream& out, const std::vector<UserModel>& models) {
  for (const auto& um : models) {
    json doc;
    doc["schema_version"] = kModelSchemaVersion;
    doc["user"] = um.user;

    if (um.gaussian) {
      doc["baseline"] = "gaussian_st";
      doc["label_kind"] = "poi";
      doc["total"] = um.gaussian->total;
      json classes = json::object();
      for (const auto& [label, s] : um.gaussian->classes) {
        classes[label] = {{"count", s.count},
                          {"mean_phi", s.mean_phi},
                          {"var_phi", s.var_phi},
                          {"mean_hour", s.mean_hour},
                          {"var_hour", s.var_hour}};
      }
      doc["classes"] = std::move(classes);
      out << doc.dump() << '\n';
      continue;
    }

    doc["label_kind"] = to_string(um.model.label_kind);
    doc["alpha"] = um.model.alpha;
    doc["total"] = um.model.total;

    json classes = json::object();
    for (const auto& [cls, n] : um.model.class_counts) classes[cls] = n;
    doc["class_counts"] = std::move(classes);

    json features = json::array();
    for (const auto& table : um.model.features) features.push_back(feature_to_json(table));
    doc["features"] = std::move(features);

    json weights = json::object();
    for (const auto& [f, w] : um.weights.weights) weights[feature_name(f)] = w;
    doc["weights"] = {{"mode", to_string(um.weights.mode)}, {"values", std::move(weights)}};

    if (um.model.label_kind == LabelKind::duration) {
      doc["bin_edges"] = um.model.bin_edges;
      json reps = json::object();
      for (const auto& [cls, rep] : um.model.representatives) reps[cls] = rep;
      doc["representatives"] = std::move(reps);
    }
    out << doc.dump() << '\n';
  }
}

std::vector<UserModel> load_models_jsonl(std::istream& in) {
  std::vector<UserModel> models;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json doc;
    try {
      doc = json::parse(line);
    } catch (const json::parse_error& e) {
      throw std::runtime_error("model file: bad JSON on line " + std::to_string(line_no) + ": " +
                               e.what());
    }
    int version = doc.at("schema_version").get<int>();
    if (version != kModelSchemaVersion) {
      throw std::runtime_error("model file: schema_version " + std::to_string(version) +
                               " unsupported (expected " + std::to_string(kModelSchemaVersion) +
                               ")");
    }

    UserModel um;
    um.user = doc.at("user").get<std::string>();

    if (doc.contains("baseline")) {
      std::string baseline = doc.at("baseline").get<std::string>();
      if (baseline != "gaussian_st") {
        throw std::runtime_error("model file: unknown baseline '" + baseline + "' on line " +
                                 std::to_string(line_no));
      }
      GaussianStModel g;
      g.total = doc.at("total").get<std::int64_t>();
      for (const auto& [label, s] : doc.at("classes").items()) {
        GaussianStModel::ClassStats cs;
        cs.count = s.at("count").get<std::int64_t>();
        cs.mean_phi = s.at("mean_phi").get<double>();
        cs.var_phi = s.at("var_phi").get<double>();
        cs.mean_hour = s.at("mean_hour").get<double>();
        cs.var_hour = s.at("var_hour").get<double>();
        g.classes[label] = cs;
      }
      um.model.label_kind = LabelKind::poi;
      um.gaussian = std::move(g);
      models.push_back(std::move(um));
      continue;
    }

    um.model.label_kind = label_kind_from_string(doc.at("label_kind").get<std::string>());
    um.model.alpha = doc.at("alpha").get<double>();
    um.model.total = doc.at("total").get<std::int64_t>();
    for (const auto& [cls, n] : doc.at("class_counts").items()) {
      um.model.class_counts[cls] = n.get<std::int64_t>();
    }
    for (const auto& f : doc.at("features")) um.model.features.push_back(feature_from_json(f));

    const auto& weights = doc.at("weights");
    um.weights.label_kind = um.model.label_kind;
    um.weights.mode = weight_mode_from_string(weights.at("mode").get<std::string>());
    for (const auto& [name, w] : weights.at("values").items()) {
      um.weights.weights[feature_from_name(name)] = w.get<double>();
    }

    if (um.model.label_kind == LabelKind::duration) {
      um.model.bin_edges = doc.at("bin_edges").get<std::vector<Seconds>>();
      for (const auto& [cls, rep] : doc.at("representatives").items()) {
        um.model.representatives[cls] = rep.get<double>();
      }
    }
    models.push_back(std::move(um));
  }
  return models;
}

}  // namespace enco
