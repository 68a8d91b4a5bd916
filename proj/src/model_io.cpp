#include "rbfn/model_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace rbfn {

namespace {

using json = nlohmann::ordered_json;

json scaler_to_json(const Scaler& s) {
  return json{{"medians", s.medians}, {"iqrs", s.iqrs}};
}

Scaler scaler_from_json(const json& j) {
  Scaler s;
  s.medians = j.at("medians").get<std::vector<double>>();
  s.iqrs = j.at("iqrs").get<std::vector<double>>();
  return s;
}

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed model file: ") + e.what());
  }
}

void check_envelope(const json& j, const std::string& expected_kind) {
  int version = -1;
  try {
    version = j.at("format_version").get<int>();
  } catch (const nlohmann::json::exception&) {
    throw ValidationError("model file has no format_version field");
  }
  if (version != kModelFormatVersion)
    throw ValidationError("unsupported model format_version " + std::to_string(version) +
                          " (expected " + std::to_string(kModelFormatVersion) + ")");
  const std::string kind = j.value("kind", "");
  if (kind != expected_kind)
    throw ValidationError("model kind is '" + kind + "', expected '" + expected_kind + "'");
}

}  // namespace

std::string to_json(const RbfModel& model) {
  json j;
  j["format_version"] = kModelFormatVersion;
  j["kind"] = "rbf";
  j["kernel"] = "gaussian";
  j["spread_mode"] = to_string(model.spread_mode);
  j["feature_names"] = model.feature_names;
  j["class_names"] = model.class_names;
  j["scaler"] = scaler_to_json(model.scaler);
  j["centers"] = model.centers;
  if (model.spread_mode == SpreadMode::scalar) {
    std::vector<double> flat;
    for (const auto& row : model.spreads) flat.push_back(row[0]);
    j["spreads"] = flat;
  } else {
    j["spreads"] = model.spreads;
  }
  j["weights"] = model.weights;
  return j.dump(2) + "\n";
}

RbfModel rbf_from_json(const std::string& text) {
  json j = parse(text);
  check_envelope(j, "rbf");
  try {
    if (j.at("kernel").get<std::string>() != "gaussian")
      throw ValidationError("unsupported kernel '" + j.at("kernel").get<std::string>() + "'");
    RbfModel model;
    model.spread_mode = spread_mode_from_string(j.at("spread_mode").get<std::string>());
    model.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    model.class_names = j.at("class_names").get<std::vector<std::string>>();
    model.scaler = scaler_from_json(j.at("scaler"));
    model.centers = j.at("centers").get<Mat>();
    if (model.spread_mode == SpreadMode::scalar) {
      auto flat = j.at("spreads").get<std::vector<double>>();
      for (double s : flat) model.spreads.push_back({s});
    } else {
      model.spreads = j.at("spreads").get<Mat>();
    }
    model.weights = j.at("weights").get<Mat>();
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed rbf model: ") + e.what());
  }
}

std::string to_json(const SavedLogistic& saved) {
  json j;
  j["format_version"] = kModelFormatVersion;
  j["kind"] = "logistic";
  j["feature_names"] = saved.feature_names;
  j["class_names"] = saved.model.class_names;
  j["scaler"] = scaler_to_json(saved.scaler);
  j["weights"] = saved.model.weights;
  return j.dump(2) + "\n";
}

SavedLogistic logistic_from_json(const std::string& text) {
  json j = parse(text);
  check_envelope(j, "logistic");
  try {
    SavedLogistic saved;
    saved.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    saved.model.class_names = j.at("class_names").get<std::vector<std::string>>();
    saved.scaler = scaler_from_json(j.at("scaler"));
    saved.model.weights = j.at("weights").get<Mat>();
    return saved;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed logistic model: ") + e.what());
  }
}

std::string to_json(const SavedMlp& saved) {
  json j;
  j["format_version"] = kModelFormatVersion;
  j["kind"] = "mlp";
  j["feature_names"] = saved.feature_names;
  j["class_names"] = saved.model.class_names;
  j["scaler"] = scaler_to_json(saved.scaler);
  j["hidden_weights"] = saved.model.hidden_weights;
  j["output_weights"] = saved.model.output_weights;
  return j.dump(2) + "\n";
}

SavedMlp mlp_from_json(const std::string& text) {
  json j = parse(text);
  check_envelope(j, "mlp");
  try {
    SavedMlp saved;
    saved.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    saved.model.class_names = j.at("class_names").get<std::vector<std::string>>();
    saved.scaler = scaler_from_json(j.at("scaler"));
    saved.model.hidden_weights = j.at("hidden_weights").get<Mat>();
    saved.model.output_weights = j.at("output_weights").get<Mat>();
    return saved;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed mlp model: ") + e.what());
  }
}

std::string model_kind(const std::string& text) {
  return parse(text).value("kind", "");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open output file: " + path);
  out << content;
  if (!out) throw IoError("failed writing file: " + path);
}

void save_rbf(const RbfModel& model, const std::string& path) {
  write_text_file(path, to_json(model));
}

RbfModel load_rbf(const std::string& path) {
  return rbf_from_json(read_text_file(path));
}

}  // namespace rbfn
