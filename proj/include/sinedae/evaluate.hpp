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

#ifndef SINEDAE_EVALUATE_HPP_
#define SINEDAE_EVALUATE_HPP_

#include <string>
#include <vector>

#include "sinedae/corpus.hpp"
#include "sinedae/metrics.hpp"
#include "sinedae/model.hpp"
#include "sinedae/separation.hpp"
#include "sinedae/stft.hpp"

namespace sinedae {

/// Checkpoints whose autoencoding median falls below this are flagged
/// "untrained" in the summary instead of asserting separation quality.
constexpr double kUntrainedMedianDb = 5.0;

struct EvalOptions {
  int segment_len = 44100;      // non-overlapping evaluation segments
  double silence_db = -60.0;    // judged on the vocal stem
  StftConfig stft;              // masking baseline configuration
  MaskApplication mask_application = MaskApplication::kEncodedMixture;
};

/// Everything measured for one retained segment.
struct SegmentRecord {
  int run_id = 0;
  std::string track_id;
  int segment_index = 0;
  double recon_db = 0.0;    // decode(encode(clean vocal)) vs clean vocal
  double masked_db = 0.0;   // binary-masked separation estimate vs clean vocal
  double stft_bm_db = 0.0;  // STFT ideal-binary-mask baseline
  double input_db = 0.0;    // no-processing mixture vs clean vocal
  double tv_mix = 0.0;      // TV of the encoded mixture representation
};

struct EvalRun {
  int run_id = 0;
  std::vector<SegmentRecord> rows;
};

/// Tracks are down-mixed (at load), cut into non-overlapping segments, and
/// segments whose vocal stem is silent are discarded. Rows are ordered by
/// (track, segment) for determinism.
EvalRun EvaluateRun(const std::vector<TrackPair>& corpus, const Model& model,
                    const EvalOptions& opts, int run_id);

/// Writes reconstruction.csv / masked_separation.csv / stft_baseline.csv /
/// input_mixture.csv (run_id,track_id,segment_index,si_sdr_db,sentinel_flag),
/// tv_mix.csv, and summary.json with pooled and per-run medians. Returns
/// the summary JSON text.
std::string WriteEvalReport(const std::string& out_dir, const std::vector<EvalRun>& runs,
                            const std::string& config_hash, const EvalOptions& opts);

// Representation container for external plotting tools: magic "SDAEREP1",
// u32 rows, u32 cols, then float32 row-major data, all little-endian.
void WriteRepresentation(const std::string& path, const Matrix& a);
Matrix ReadRepresentation(const std::string& path);

}  // namespace sinedae

#endif  // SINEDAE_EVALUATE_HPP_
