#include "rbfn/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace rbfn {

namespace {

// one-decimal rounding via integer tenths so the shortest decimal stays short
double round1(double v) { return std::round(v * 10.0) / 10.0; }

std::string make_id(std::size_t i, std::size_t n) {
  std::size_t width = 4;
  for (std::size_t v = n; v >= 10000; v /= 10) ++width;
  std::string digits = std::to_string(i + 1);
  return "S" + std::string(width - std::min(width, digits.size()), '0') + digits;
}

}  // namespace

std::vector<PatientRecord> generate_patients(const SyntheticSpec& spec) {
  if (spec.n < 1) throw ValidationError("record count must be at least 1");
  if (!(spec.cd4_low_threshold < spec.cd4_high_threshold))
    throw ValidationError("cd4 thresholds must satisfy low < high");
  if (spec.label_noise < 0 || spec.label_noise >= 0.5)
    throw ValidationError("label noise must lie in [0, 0.5)");

  Rng rng(spec.seed);
  std::vector<PatientRecord> records;
  records.reserve(spec.n);

  for (std::size_t i = 0; i < spec.n; ++i) {
    PatientRecord r;
    r.id = make_id(i, spec.n);
    r.age = 20 + static_cast<int>(rng.below(26));  // [20, 45]
    r.weight = round1(rng.uniform(30.0, 95.0));
    r.cd4 = std::round(rng.uniform(10.0, 400.0));
    r.cd8 = std::round(rng.uniform(250.0, 1600.0));
    r.hb = round1(rng.uniform(7.0, 13.0));
    r.tlc = std::round(rng.uniform(500.0, 1800.0));

    bool low;
    if (r.cd4 < spec.cd4_low_threshold) {
      low = true;
    } else if (r.cd4 > spec.cd4_high_threshold) {
      low = false;
    } else {
      // mid-range: nearer threshold wins
      low = (r.cd4 - spec.cd4_low_threshold) <= (spec.cd4_high_threshold - r.cd4);
    }
    if (rng.unit() < spec.label_noise) low = !low;
    r.prolong = low ? "<50%" : ">75%";
    records.push_back(std::move(r));
  }

  // regimen by TLC tertile band over the generated sample
  std::vector<double> tlc(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) tlc[i] = records[i].tlc;
  std::sort(tlc.begin(), tlc.end());
  const double t1 = quantile_sorted(tlc, 1.0 / 3.0);
  const double t2 = quantile_sorted(tlc, 2.0 / 3.0);
  for (auto& r : records) {
    if (r.tlc <= t1)
      r.regimen = "ZLN";
    else if (r.tlc <= t2)
      r.regimen = "ZLE";
    else
      r.regimen = "SLN 30";
  }
  return records;
}

void write_patient_csv(std::ostream& out, const std::vector<PatientRecord>& records) {
  out << "id,age,weight,cd4,cd8,hb,tlc,regimen,prolong\n";
  for (const auto& r : records) {
    out << r.id << "," << r.age << "," << fmt_double(r.weight) << "," << fmt_double(r.cd4) << ","
        << fmt_double(r.cd8) << "," << fmt_double(r.hb) << "," << fmt_double(r.tlc) << ","
        << r.regimen << "," << r.prolong << "\n";
  }
}

void write_patient_csv_file(const std::string& path, const std::vector<PatientRecord>& records) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open output file: " + path);
  write_patient_csv(out, records);
}

}  // namespace rbfn
