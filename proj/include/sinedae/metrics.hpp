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

#ifndef SINEDAE_METRICS_HPP_
#define SINEDAE_METRICS_HPP_

#include <string>
#include <vector>

#include "sinedae/matrix.hpp"

namespace sinedae {

/// Display ceiling for SI-SDR sentinels in reports; +inf rows are written
/// as +kSiSdrCapDb (flagged), -inf rows as -kSiSdrCapDb.
constexpr double kSiSdrCapDb = 100.0;

/// Scale-invariant signal-to-distortion ratio in dB. With
/// alpha = <est, ref> / |ref|^2, returns 10*log10(|alpha*ref|^2 /
/// |alpha*ref - est|^2). Exact zeros map to sentinels: +inf when the
/// distortion vanishes (est is a positive rescaling of ref), -inf when est
/// is orthogonal to ref. Throws DataError for a zero-energy reference.
double SiSdr(const std::vector<double>& ref, const std::vector<double>& est);

/// One per-segment score line; sentinel scores keep their +-inf value here
/// and are capped only at serialization time.
struct SegmentScore {
  int run_id = 0;
  std::string track_id;
  int segment_index = 0;
  double si_sdr_db = 0.0;
};

struct MedianSummary {
  double median = 0.0;            // pooled over all finite scores of all runs
  std::size_t finite_count = 0;
  std::size_t pos_inf_count = 0;
  std::size_t neg_inf_count = 0;
  std::vector<double> per_run_medians;
  double median_of_medians = 0.0;
};

/// Median over the pooled finite scores of all runs; an even count takes
/// the mean of the two central values. Sentinels are excluded and counted.
/// Throws DataError when no finite score exists.
MedianSummary MedianReport(const std::vector<SegmentScore>& scores);

/// Plain median of a finite-valued list (even count -> central mean).
double Median(std::vector<double> values);

/// CSV with header run_id,track_id,segment_index,si_sdr_db,sentinel_flag.
/// Finite values are printed with full round-trip precision so medians
/// recomputed from the file match the JSON summary exactly.
void WriteScoreCsv(const std::string& path, const std::vector<SegmentScore>& scores);

std::vector<SegmentScore> ReadScoreCsv(const std::string& path);

}  // namespace sinedae

#endif  // SINEDAE_METRICS_HPP_
