#include "rbfn/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace rbfn {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

double parse_number(const std::string& field, const std::string& column, std::size_t line_no) {
  std::size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(field, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != field.size() || field.empty())
    throw ValidationError("line " + std::to_string(line_no) + ": column '" + column +
                          "' is not numeric: '" + field + "'");
  if (!std::isfinite(v))
    throw ValidationError("line " + std::to_string(line_no) + ": column '" + column +
                          "' is not finite");
  return v;
}

void require_positive(double v, const std::string& column, std::size_t line_no) {
  if (v <= 0)
    throw ValidationError("line " + std::to_string(line_no) + ": column '" + column +
                          "' must be positive, got " + fmt_double(v));
}

void require_non_negative(double v, const std::string& column, std::size_t line_no) {
  if (v < 0)
    throw ValidationError("line " + std::to_string(line_no) + ": column '" + column +
                          "' must be non-negative, got " + fmt_double(v));
}

const std::vector<std::string> kRequiredColumns = {"id", "age", "weight", "cd4",
                                                   "cd8", "hb",  "tlc"};
const std::vector<std::string> kOptionalColumns = {"first_identified", "regimen", "prolong"};

}  // namespace

ParseResult parse_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("empty input: missing header row");
  std::vector<std::string> header = split_line(line);

  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
  for (const auto& name : kRequiredColumns)
    if (!col.count(name)) throw ValidationError("missing required column: " + name);

  auto get = [&](const std::vector<std::string>& fields, const std::string& name) -> std::string {
    auto it = col.find(name);
    if (it == col.end() || it->second >= fields.size()) return "";
    return fields[it->second];
  };

  ParseResult result;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::vector<std::string> fields = split_line(line);
    if (fields.size() < kRequiredColumns.size())
      throw ValidationError("line " + std::to_string(line_no) + ": expected at least " +
                            std::to_string(kRequiredColumns.size()) + " fields, got " +
                            std::to_string(fields.size()));

    PatientRecord r;
    r.id = get(fields, "id");
    double age = parse_number(get(fields, "age"), "age", line_no);
    if (age <= 0 || age != std::floor(age))
      throw ValidationError("line " + std::to_string(line_no) +
                            ": column 'age' must be a positive integer, got " + fmt_double(age));
    r.age = static_cast<int>(age);
    r.weight = parse_number(get(fields, "weight"), "weight", line_no);
    require_positive(r.weight, "weight", line_no);
    r.cd4 = parse_number(get(fields, "cd4"), "cd4", line_no);
    require_non_negative(r.cd4, "cd4", line_no);
    r.cd8 = parse_number(get(fields, "cd8"), "cd8", line_no);
    require_non_negative(r.cd8, "cd8", line_no);
    r.hb = parse_number(get(fields, "hb"), "hb", line_no);
    require_positive(r.hb, "hb", line_no);
    r.tlc = parse_number(get(fields, "tlc"), "tlc", line_no);
    require_positive(r.tlc, "tlc", line_no);
    r.first_identified = get(fields, "first_identified");
    r.regimen = get(fields, "regimen");
    r.prolong = get(fields, "prolong");

    if (r.age > 45)
      result.warnings.push_back("line " + std::to_string(line_no) + " (id " + r.id +
                                "): age " + std::to_string(r.age) +
                                " exceeds the protocol maximum of 45");
    result.records.push_back(std::move(r));
  }
  return result;
}

ParseResult parse_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open data file: " + path);
  return parse_csv(in);
}

Target target_from_string(const std::string& s) {
  if (s == "prolong") return Target::prolong;
  if (s == "regimen") return Target::regimen;
  throw ValidationError("unknown target '" + s + "' (expected prolong or regimen)");
}

std::string to_string(Target t) {
  return t == Target::prolong ? "prolong" : "regimen";
}

const std::vector<std::string>& default_feature_set() {
  static const std::vector<std::string> names = {"age", "weight", "cd4", "cd8", "hb", "tlc"};
  return names;
}

namespace {

bool is_numeric_column(const std::string& name) {
  const auto& defaults = default_feature_set();
  return std::find(defaults.begin(), defaults.end(), name) != defaults.end();
}

double numeric_value(const PatientRecord& r, const std::string& name) {
  if (name == "age") return static_cast<double>(r.age);
  if (name == "weight") return r.weight;
  if (name == "cd4") return r.cd4;
  if (name == "cd8") return r.cd8;
  if (name == "hb") return r.hb;
  if (name == "tlc") return r.tlc;
  throw ValidationError("unknown numeric column: " + name);
}

const std::string& label_value(const PatientRecord& r, const std::string& name) {
  if (name == "regimen") return r.regimen;
  if (name == "prolong") return r.prolong;
  throw ValidationError("unknown categorical column: " + name);
}

}  // namespace

Encoded encode(const std::vector<PatientRecord>& records, Target target,
               const std::vector<std::string>& feature_set) {
  const std::string target_col = to_string(target);

  std::vector<std::string> missing_ids;
  for (const auto& r : records)
    if (label_value(r, target_col).empty()) missing_ids.push_back(r.id);
  if (!missing_ids.empty()) {
    std::string msg = "records missing target '" + target_col + "':";
    for (const auto& id : missing_ids) msg += " " + id;
    throw ValidationError(msg);
  }
  if (records.empty()) throw ValidationError("cannot encode an empty record list");

  Encoded out;

  // feature layout: numeric columns pass through, categoricals expand to
  // N-1 dummies over their lexicographically sorted levels
  std::map<std::string, std::vector<std::string>> levels;  // categorical col -> sorted levels
  for (const auto& name : feature_set) {
    if (name == target_col)
      throw ValidationError("feature set must not contain the target column '" + name + "'");
    if (is_numeric_column(name)) {
      out.features.feature_names.push_back(name);
    } else {
      std::set<std::string> distinct;
      for (const auto& r : records) distinct.insert(label_value(r, name));
      std::vector<std::string> sorted(distinct.begin(), distinct.end());
      levels[name] = sorted;
      for (std::size_t l = 1; l < sorted.size(); ++l)
        out.features.feature_names.push_back(name + "=" + sorted[l]);
    }
  }

  for (const auto& r : records) {
    std::vector<double> row;
    row.reserve(out.features.feature_names.size());
    for (const auto& name : feature_set) {
      if (is_numeric_column(name)) {
        row.push_back(numeric_value(r, name));
      } else {
        const auto& sorted = levels[name];
        const std::string& v = label_value(r, name);
        for (std::size_t l = 1; l < sorted.size(); ++l)
          row.push_back(v == sorted[l] ? 1.0 : 0.0);
      }
    }
    out.features.values.push_back(std::move(row));
  }

  std::set<std::string> distinct_labels;
  for (const auto& r : records) distinct_labels.insert(label_value(r, target_col));
  out.labels.class_names.assign(distinct_labels.begin(), distinct_labels.end());
  if (out.labels.class_names.size() < 2)
    throw ValidationError("target '" + target_col + "' has fewer than 2 distinct labels");

  for (const auto& r : records) {
    const std::string& v = label_value(r, target_col);
    auto it = std::lower_bound(out.labels.class_names.begin(), out.labels.class_names.end(), v);
    out.labels.indices.push_back(static_cast<int>(it - out.labels.class_names.begin()));
  }
  return out;
}

FeatureMatrix encode_features(const std::vector<PatientRecord>& records,
                              const std::vector<std::string>& feature_names) {
  FeatureMatrix out;
  out.feature_names = feature_names;
  for (const auto& r : records) {
    std::vector<double> row;
    row.reserve(feature_names.size());
    for (const auto& name : feature_names) {
      auto eq = name.find('=');
      if (eq == std::string::npos) {
        row.push_back(numeric_value(r, name));
      } else {
        const std::string col = name.substr(0, eq);
        const std::string level = name.substr(eq + 1);
        row.push_back(label_value(r, col) == level ? 1.0 : 0.0);
      }
    }
    out.values.push_back(std::move(row));
  }
  return out;
}

double quantile_sorted(const std::vector<double>& sorted, double p) {
  const std::size_t n = sorted.size();
  if (n == 1) return sorted[0];
  double pos = p * static_cast<double>(n - 1);
  std::size_t lo = static_cast<std::size_t>(pos);
  if (lo >= n - 1) return sorted[n - 1];
  double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

double median_sorted(const std::vector<double>& sorted) {
  const std::size_t n = sorted.size();
  if (n % 2 == 1) return sorted[n / 2];
  return (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0;
}

Scaler fit_scaler(const FeatureMatrix& m) {
  if (m.rows() == 0) throw ValidationError("fit_scaler requires at least one row");
  Scaler s;
  const std::size_t d = m.cols();
  s.medians.resize(d);
  s.iqrs.resize(d);
  std::vector<double> column(m.rows());
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t i = 0; i < m.rows(); ++i) column[i] = m.values[i][j];
    std::sort(column.begin(), column.end());
    s.medians[j] = median_sorted(column);
    s.iqrs[j] = quantile_sorted(column, 0.75) - quantile_sorted(column, 0.25);
  }
  return s;
}

std::vector<double> transform_row(const Scaler& s, const std::vector<double>& row) {
  if (row.size() != s.medians.size())
    throw ValidationError("transform: row has " + std::to_string(row.size()) +
                          " features, scaler expects " + std::to_string(s.medians.size()));
  std::vector<double> out(row.size());
  for (std::size_t j = 0; j < row.size(); ++j) {
    double divisor = s.iqrs[j] > 0 ? s.iqrs[j] : 1.0;
    out[j] = (row[j] - s.medians[j]) / divisor;
  }
  return out;
}

FeatureMatrix transform(const Scaler& s, const FeatureMatrix& m) {
  if (m.cols() != s.medians.size())
    throw ValidationError("transform: matrix has " + std::to_string(m.cols()) +
                          " columns, scaler expects " + std::to_string(s.medians.size()));
  FeatureMatrix out;
  out.feature_names = m.feature_names;
  out.values.reserve(m.rows());
  for (const auto& row : m.values) out.values.push_back(transform_row(s, row));
  return out;
}

}  // namespace rbfn
