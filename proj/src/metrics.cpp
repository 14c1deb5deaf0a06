// Copyright 2026 The sinedae Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sinedae/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

namespace sinedae {

double SiSdr(const std::vector<double>& ref, const std::vector<double>& est) {
  if (ref.size() != est.size()) throw DimensionError("si_sdr: length mismatch");
  double ref_energy = 0.0;
  double dot = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    ref_energy += ref[i] * ref[i];
    dot += est[i] * ref[i];
  }
  if (ref_energy <= 0.0) throw DataError("si_sdr: zero-energy reference");
  if (dot == 0.0) return -std::numeric_limits<double>::infinity();

  const double alpha = dot / ref_energy;
  double target_energy = 0.0;
  double distortion = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    const double target = alpha * ref[i];
    target_energy += target * target;
    const double d = target - est[i];
    distortion += d * d;
  }
  if (distortion == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(target_energy / distortion);
}

double Median(std::vector<double> values) {
  if (values.empty()) throw DataError("median of empty list");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

MedianSummary MedianReport(const std::vector<SegmentScore>& scores) {
  MedianSummary s;
  std::vector<double> pooled;
  std::map<int, std::vector<double>> per_run;
  for (const SegmentScore& sc : scores) {
    if (std::isfinite(sc.si_sdr_db)) {
      pooled.push_back(sc.si_sdr_db);
      per_run[sc.run_id].push_back(sc.si_sdr_db);
    } else if (sc.si_sdr_db > 0.0) {
      ++s.pos_inf_count;
    } else {
      ++s.neg_inf_count;
    }
  }
  if (pooled.empty()) throw DataError("median_report: no finite scores");
  s.finite_count = pooled.size();
  s.median = Median(pooled);
  std::vector<double> run_medians;
  for (auto& [run, vals] : per_run) run_medians.push_back(Median(vals));
  s.per_run_medians = run_medians;
  s.median_of_medians = Median(run_medians);
  return s;
}

void WriteScoreCsv(const std::string& path, const std::vector<SegmentScore>& scores) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write CSV: " + path);
  out << "run_id,track_id,segment_index,si_sdr_db,sentinel_flag\n";
  char buf[64];
  for (const SegmentScore& s : scores) {
    const bool sentinel = !std::isfinite(s.si_sdr_db);
    const double printed =
        sentinel ? (s.si_sdr_db > 0.0 ? kSiSdrCapDb : -kSiSdrCapDb) : s.si_sdr_db;
    std::snprintf(buf, sizeof(buf), "%.17g", printed);
    out << s.run_id << ',' << s.track_id << ',' << s.segment_index << ',' << buf << ','
        << (sentinel ? 1 : 0) << '\n';
  }
  if (!out) throw IoError("CSV write failed: " + path);
}

std::vector<SegmentScore> ReadScoreCsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read CSV: " + path);
  std::vector<SegmentScore> out;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (header) {
      header = false;
      continue;
    }
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string field;
    SegmentScore s;
    std::getline(ss, field, ',');
    s.run_id = std::stoi(field);
    std::getline(ss, s.track_id, ',');
    std::getline(ss, field, ',');
    s.segment_index = std::stoi(field);
    std::getline(ss, field, ',');
    const double value = std::stod(field);
    std::getline(ss, field, ',');
    const int flag = std::stoi(field);
    s.si_sdr_db = flag != 0 ? (value > 0.0 ? std::numeric_limits<double>::infinity()
                                           : -std::numeric_limits<double>::infinity())
                            : value;
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace sinedae
