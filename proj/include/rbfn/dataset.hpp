#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "rbfn/common.hpp"

namespace rbfn {

// One clinical row. first_identified is kept verbatim (dates in the source
// data are malformed more often than not) and never used as a feature.
struct PatientRecord {
  std::string id;
  int age = 0;        // years
  double weight = 0;  // kg
  double cd4 = 0;     // cells/uL
  double cd8 = 0;     // cells/uL
  double hb = 0;      // g/dL
  double tlc = 0;     // cells/uL
  std::string first_identified;
  std::string regimen;  // optional category label
  std::string prolong;  // optional category label
};

struct ParseResult {
  std::vector<PatientRecord> records;
  std::vector<std::string> warnings;
};

// CSV: UTF-8, comma separated, header row required.
// Required columns: id,age,weight,cd4,cd8,hb,tlc
// Optional columns: first_identified,regimen,prolong
ParseResult parse_csv(std::istream& in);
ParseResult parse_csv_file(const std::string& path);

struct FeatureMatrix {
  Mat values;  // N x d
  std::vector<std::string> feature_names;

  std::size_t rows() const { return values.size(); }
  std::size_t cols() const { return values.empty() ? feature_names.size() : values[0].size(); }
};

struct LabelVector {
  std::vector<int> indices;              // N entries, each < class_names.size()
  std::vector<std::string> class_names;  // L >= 2, lexicographic order
};

enum class Target { prolong, regimen };

Target target_from_string(const std::string& s);
std::string to_string(Target t);

// The six numeric columns used as predictors: age,weight,cd4,cd8,hb,tlc.
const std::vector<std::string>& default_feature_set();

struct Encoded {
  FeatureMatrix features;
  LabelVector labels;
};

// Numeric features copy through; a categorical feature with N levels expands
// to N-1 dummy columns named "col=level" (lexicographically first level is
// the all-zeros reference). Target labels map to indices over the distinct
// labels in lexicographic order.
Encoded encode(const std::vector<PatientRecord>& records, Target target,
               const std::vector<std::string>& feature_set = default_feature_set());

// Featurize records against an already-fitted feature layout (e.g. a saved
// model's feature_names). Dummy columns are matched by their "col=level"
// name; a level unseen at fit time leaves its dummy block all zeros.
FeatureMatrix encode_features(const std::vector<PatientRecord>& records,
                              const std::vector<std::string>& feature_names);

// Per-feature median and interquartile range.
struct Scaler {
  std::vector<double> medians;
  std::vector<double> iqrs;
};

// Median: midpoint of the two middle order statistics for even N.
// Quartiles: linear interpolation at positions 0.25(N-1) and 0.75(N-1)
// over the sorted values; IQR = Q3 - Q1.
Scaler fit_scaler(const FeatureMatrix& m);

// (x - median) / iqr, with divisor 1 where iqr == 0.
FeatureMatrix transform(const Scaler& s, const FeatureMatrix& m);
std::vector<double> transform_row(const Scaler& s, const std::vector<double>& row);

// Linear interpolation at p*(N-1) over sorted values.
double quantile_sorted(const std::vector<double>& sorted, double p);
double median_sorted(const std::vector<double>& sorted);

}  // namespace rbfn
