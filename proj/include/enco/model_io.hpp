#pragma once

#include <istream>
#include <optional>
#include <ostream>
#include <vector>

#include "enco/baselines.hpp"
#include "enco/bayes.hpp"
#include "enco/types.hpp"

namespace enco {

inline constexpr int kModelSchemaVersion = 1;

// One trained predictor: a user's count tables plus the weight set that was
// active at training time. Gaussian baseline models share the same file with
// a `baseline: gaussian_st` marker (unweighted NBC is the `unit` weight
// mode of the count model).
struct UserModel {
  UserId user;
  CountModel model;
  WeightSet weights;
  std::optional<GaussianStModel> gaussian;  // set only for baseline documents
};

// JSON-lines, one document per (user, label_kind). Counts are persisted, not
// probabilities, so alpha can change without a refit.
void save_models_jsonl(std::ostream& out, const std::vector<UserModel>& models);

// Throws std::runtime_error on a schema_version mismatch or malformed input.
std::vector<UserModel> load_models_jsonl(std::istream& in);

}  // namespace enco
