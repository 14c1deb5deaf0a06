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

#ifndef SINEDAE_CORPUS_HPP_
#define SINEDAE_CORPUS_HPP_

#include <string>
#include <vector>

#include "sinedae/audio_io.hpp"

namespace sinedae {

struct TrackPair {
  std::string track_id;
  Waveform vocals;
  Waveform accompaniment;
};

/// Loads every <dir>/<track>/{vocals.wav,accompaniment.wav} pair, sorted by
/// track name for determinism. Throws DataError listing what is missing
/// when a track directory lacks a stem, or when no track is found.
std::vector<TrackPair> LoadCorpus(const std::string& dir);

}  // namespace sinedae

#endif  // SINEDAE_CORPUS_HPP_
