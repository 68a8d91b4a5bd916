#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "rbfn/dataset.hpp"

namespace rbfn {

// Seeded generator for synthetic patient records. Feature ranges follow the
// spans observed in the reference sample; the prolong label encodes the CD4
// pattern in that sample (low CD4 -> "<50%", high CD4 -> ">75%", mid-range
// by threshold proximity), optionally flipped with probability label_noise.
// Regimens are assigned by TLC tertile band.
struct SyntheticSpec {
  std::size_t n = 500;
  std::uint64_t seed = 0;
  double cd4_low_threshold = 50.0;
  double cd4_high_threshold = 100.0;
  double label_noise = 0.0;  // in [0, 0.5)
};

std::vector<PatientRecord> generate_patients(const SyntheticSpec& spec);

// CSV with columns id,age,weight,cd4,cd8,hb,tlc,regimen,prolong.
void write_patient_csv(std::ostream& out, const std::vector<PatientRecord>& records);
void write_patient_csv_file(const std::string& path, const std::vector<PatientRecord>& records);

}  // namespace rbfn
