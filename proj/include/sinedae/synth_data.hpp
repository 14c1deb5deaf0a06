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

#ifndef SINEDAE_SYNTH_DATA_HPP_
#define SINEDAE_SYNTH_DATA_HPP_

#include <cstdint>
#include <string>

#include "sinedae/audio_io.hpp"
#include "sinedae/rng.hpp"

namespace sinedae {

// Desk-scale paired corpus generator. "Vocals" are phrases of 3-8 harmonics
// with random f0 in [100, 400] Hz, vibrato and amplitude envelopes,
// separated by short silences; "accompaniment" is a low-frequency tone line
// plus band-passed noise. Bit-identical per seed; peak <= 0.9.
struct SynthSpec {
  int tracks = 20;
  double duration_s = 10.0;
  int sample_rate = 44100;
  std::uint64_t seed = 0;
  int train_split = 16;  // first train_split tracks land in train/, rest in test/
};

Waveform SynthVocalTrack(Rng& rng, int samples, int sample_rate);
Waveform SynthAccompanimentTrack(Rng& rng, int samples, int sample_rate);

/// Writes <out_dir>/{train,test}/trackNN/{vocals,accompaniment}.wav as
/// float32 WAV. Directories are created as needed.
void GenerateCorpus(const std::string& out_dir, const SynthSpec& spec);

}  // namespace sinedae

#endif  // SINEDAE_SYNTH_DATA_HPP_
