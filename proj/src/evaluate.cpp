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

#include "sinedae/evaluate.hpp"

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "sinedae/losses.hpp"

namespace sinedae {

using nlohmann::json;

namespace {

namespace fs = std::filesystem;

std::vector<double> ToDouble(const std::vector<float>& x) {
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i];
  return out;
}

std::vector<SegmentScore> Column(const std::vector<EvalRun>& runs,
                                 double SegmentRecord::*field) {
  std::vector<SegmentScore> out;
  for (const EvalRun& run : runs) {
    for (const SegmentRecord& r : run.rows) {
      out.push_back({r.run_id, r.track_id, r.segment_index, r.*field});
    }
  }
  return out;
}

json SummaryOf(const std::vector<SegmentScore>& scores) {
  const MedianSummary s = MedianReport(scores);
  json j;
  j["median"] = s.median;
  j["finite_count"] = s.finite_count;
  j["pos_inf_count"] = s.pos_inf_count;
  j["neg_inf_count"] = s.neg_inf_count;
  j["per_run_medians"] = s.per_run_medians;
  j["median_of_medians"] = s.median_of_medians;
  return j;
}

}  // namespace

EvalRun EvaluateRun(const std::vector<TrackPair>& corpus, const Model& model,
                    const EvalOptions& opts, int run_id) {
  if (corpus.empty()) throw DataError("evaluation corpus is empty");
  EvalRun run;
  run.run_id = run_id;

  for (const TrackPair& track : corpus) {
    const SegmentSet voc =
        Segment(track.vocals, opts.segment_len, opts.segment_len, false, SourceTag::kVocals);
    const SegmentSet acc = Segment(track.accompaniment, opts.segment_len, opts.segment_len,
                                   false, SourceTag::kAccompaniment);
    for (std::size_t s = 0; s < voc.segments.size(); ++s) {
      if (IsSilent(voc.segments[s], opts.silence_db)) continue;

      const std::vector<double> v = ToDouble(voc.segments[s].samples);
      const std::vector<double> a = ToDouble(acc.segments[s].samples);
      std::vector<double> mix(v.size());
      for (std::size_t i = 0; i < v.size(); ++i) mix[i] = v[i] + a[i];

      const Matrix v_mat = Matrix::RowVector(v);
      const Matrix mix_mat = Matrix::RowVector(mix);
      const Matrix a_v = Encode(model, v_mat);
      const Matrix a_acc = Encode(model, Matrix::RowVector(a));
      const Matrix a_mix = Encode(model, mix_mat);

      SegmentRecord rec;
      rec.run_id = run_id;
      rec.track_id = track.track_id;
      rec.segment_index = static_cast<int>(s);

      const Matrix recon = Decode(model, a_v, static_cast<int>(v.size()));
      rec.recon_db = SiSdr(v, recon.data);

      const Matrix mask = BinaryMask(a_v, a_acc);
      const Matrix& base =
          opts.mask_application == MaskApplication::kEncodedMixture ? a_mix : a_v;
      const Matrix est = Decode(model, ApplyMask(mask, base), static_cast<int>(v.size()));
      rec.masked_db = SiSdr(v, est.data);

      rec.stft_bm_db = SiSdr(v, StftMaskBaseline(v, a, opts.stft));
      rec.input_db = SiSdr(v, mix);
      rec.tv_mix = TvLoss(a_mix);
      run.rows.push_back(std::move(rec));
    }
  }
  if (run.rows.empty()) throw DataError("no non-silent segments left after filtering");
  return run;
}

std::string WriteEvalReport(const std::string& out_dir, const std::vector<EvalRun>& runs,
                            const std::string& config_hash, const EvalOptions& opts) {
  if (runs.empty()) throw DataError("eval report: no runs");
  fs::create_directories(out_dir);

  const auto recon = Column(runs, &SegmentRecord::recon_db);
  const auto masked = Column(runs, &SegmentRecord::masked_db);
  const auto stft_bm = Column(runs, &SegmentRecord::stft_bm_db);
  const auto input = Column(runs, &SegmentRecord::input_db);
  WriteScoreCsv((fs::path(out_dir) / "reconstruction.csv").string(), recon);
  WriteScoreCsv((fs::path(out_dir) / "masked_separation.csv").string(), masked);
  WriteScoreCsv((fs::path(out_dir) / "stft_baseline.csv").string(), stft_bm);
  WriteScoreCsv((fs::path(out_dir) / "input_mixture.csv").string(), input);

  {
    std::ofstream tv(fs::path(out_dir) / "tv_mix.csv", std::ios::trunc);
    if (!tv) throw IoError("cannot write tv_mix.csv under: " + out_dir);
    tv << "run_id,track_id,segment_index,tv\n";
    char buf[64];
    for (const EvalRun& run : runs) {
      for (const SegmentRecord& r : run.rows) {
        std::snprintf(buf, sizeof(buf), "%.17g", r.tv_mix);
        tv << r.run_id << ',' << r.track_id << ',' << r.segment_index << ',' << buf << '\n';
      }
    }
  }

  std::vector<double> tv_values;
  std::vector<int> run_ids;
  for (const EvalRun& run : runs) {
    run_ids.push_back(run.run_id);
    for (const SegmentRecord& r : run.rows) tv_values.push_back(r.tv_mix);
  }

  json summary;
  summary["config_hash"] = config_hash;
  summary["segment_len"] = opts.segment_len;
  summary["silence_db"] = opts.silence_db;
  summary["silence_reference"] = "vocals";
  summary["mask_application"] = opts.mask_application == MaskApplication::kEncodedMixture
                                    ? "encoded_mixture"
                                    : "masked_stem";
  summary["stft"] = {{"window", opts.stft.window}, {"hop", opts.stft.hop}};
  summary["runs"] = run_ids;
  summary["metrics"]["reconstruction"] = SummaryOf(recon);
  summary["metrics"]["masked_separation"] = SummaryOf(masked);
  summary["metrics"]["stft_baseline"] = SummaryOf(stft_bm);
  summary["metrics"]["input_mixture"] = SummaryOf(input);
  summary["median_tv_mix"] = Median(tv_values);
  summary["untrained"] =
      summary["metrics"]["reconstruction"]["median"].get<double>() < kUntrainedMedianDb;

  const std::string text = summary.dump(2);
  std::ofstream out(fs::path(out_dir) / "summary.json", std::ios::trunc);
  if (!out) throw IoError("cannot write summary.json under: " + out_dir);
  out << text << '\n';
  return text;
}

namespace {

constexpr char kReprMagic[8] = {'S', 'D', 'A', 'E', 'R', 'E', 'P', '1'};

void PutU32(std::ofstream& out, std::uint32_t v) {
  char buf[4];
  for (int i = 0; i < 4; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(buf, 4);
}

std::uint32_t GetU32(std::ifstream& in, const std::string& path) {
  unsigned char buf[4];
  in.read(reinterpret_cast<char*>(buf), 4);
  if (!in) throw FormatError("truncated representation file: " + path);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(buf[i]) << (8 * i);
  return v;
}

}  // namespace

void WriteRepresentation(const std::string& path, const Matrix& a) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write representation: " + path);
  out.write(kReprMagic, 8);
  PutU32(out, static_cast<std::uint32_t>(a.rows));
  PutU32(out, static_cast<std::uint32_t>(a.cols));
  for (double v : a.data) {
    const float f = static_cast<float>(v);
    out.write(reinterpret_cast<const char*>(&f), 4);
  }
  if (!out) throw IoError("representation write failed: " + path);
}

Matrix ReadRepresentation(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open representation: " + path);
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kReprMagic, 8) != 0) {
    throw FormatError("not a representation file: " + path);
  }
  const std::uint32_t rows = GetU32(in, path);
  const std::uint32_t cols = GetU32(in, path);
  Matrix m(static_cast<int>(rows), static_cast<int>(cols));
  for (double& v : m.data) {
    float f;
    in.read(reinterpret_cast<char*>(&f), 4);
    if (!in) throw FormatError("truncated representation file: " + path);
    v = f;
  }
  return m;
}

}  // namespace sinedae
