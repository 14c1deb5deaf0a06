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

#ifndef SINEDAE_AUDIO_IO_HPP_
#define SINEDAE_AUDIO_IO_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "sinedae/common.hpp"

namespace sinedae {

/// Mono time-domain signal. Samples are dimensionless amplitudes with
/// nominal range [-1, 1]; loaders guarantee finite values.
struct Waveform {
  std::vector<float> samples;
  int sample_rate = 44100;

  std::size_t Length() const { return samples.size(); }
};

enum class SourceTag { kVocals, kAccompaniment, kMixture };

/// Equal-length segments cut from one waveform. Training sets use
/// hop = n/2 (overlapping); evaluation sets use hop = n.
struct SegmentSet {
  std::vector<Waveform> segments;
  int hop = 0;
  SourceTag source_tag = SourceTag::kVocals;
};

enum class WavBits { k16, k24, kFloat32 };

struct WriteStats {
  std::size_t clipped = 0;  // samples hard-clipped to the integer range
};

/// Reads a RIFF/WAVE file with 16/24-bit integer PCM or 32-bit float
/// samples and 1 or 2 channels. Integer PCM is scaled to [-1, 1) by
/// 2^(bits-1); stereo is down-mixed by channel mean. Unknown chunks are
/// skipped. Throws FormatError on malformed headers or unsupported
/// encodings, IoError if the file cannot be opened.
Waveform ReadWav(const std::string& path);

/// Writes a mono RIFF/WAVE file at the requested bit depth. Integer
/// samples outside the representable range are hard-clipped and counted.
/// float32 output is lossless. Throws IoError on unwritable paths.
WriteStats WriteWav(const std::string& path, const Waveform& w, WavBits bits);

/// Mean of two equal-length channels.
std::vector<float> Downmix(const std::vector<float>& left,
                           const std::vector<float>& right);

/// Cuts w into segments of n samples every hop samples; segment k covers
/// [k*hop, k*hop + n). Trailing partial segments are zero-padded to n when
/// pad_last is set and dropped otherwise. n > len(w) with pad_last=false
/// yields an empty set.
SegmentSet Segment(const Waveform& w, int n, int hop, bool pad_last,
                   SourceTag tag = SourceTag::kVocals);

/// True iff the mean power 10*log10(mean(x^2)) falls below threshold_db.
/// All-zero input is silent by definition.
bool IsSilent(const Waveform& w, double threshold_db);

/// Mean power in dBFS; -inf for all-zero input.
double MeanPowerDb(const Waveform& w);

}  // namespace sinedae

#endif  // SINEDAE_AUDIO_IO_HPP_
