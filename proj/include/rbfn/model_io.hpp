#pragma once

#include <string>
#include <vector>

#include "rbfn/baselines.hpp"
#include "rbfn/rbfnet.hpp"

namespace rbfn {

inline constexpr int kModelFormatVersion = 1;

// Versioned JSON envelope with a "kind" discriminator ("rbf", "logistic",
// "mlp"). Numbers use shortest round-trip decimals, so a save/load cycle is
// bit-exact. Loading rejects unknown format versions and kinds.

std::string to_json(const RbfModel& model);
RbfModel rbf_from_json(const std::string& text);

// Baselines persist alongside the scaler and feature layout they were
// trained with, same as the RBF envelope.
struct SavedLogistic {
  LogisticModel model;
  Scaler scaler;
  std::vector<std::string> feature_names;
};
struct SavedMlp {
  MlpModel model;
  Scaler scaler;
  std::vector<std::string> feature_names;
};

std::string to_json(const SavedLogistic& saved);
SavedLogistic logistic_from_json(const std::string& text);
std::string to_json(const SavedMlp& saved);
SavedMlp mlp_from_json(const std::string& text);

// "kind" field of a serialized model.
std::string model_kind(const std::string& text);

void save_rbf(const RbfModel& model, const std::string& path);
RbfModel load_rbf(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace rbfn
