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

#include "sinedae/corpus.hpp"

#include <algorithm>
#include <filesystem>

namespace sinedae {

std::vector<TrackPair> LoadCorpus(const std::string& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw DataError("corpus directory not found: " + dir);

  std::vector<std::string> names;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_directory()) names.push_back(entry.path().filename().string());
  }
  std::sort(names.begin(), names.end());

  std::vector<TrackPair> out;
  std::string missing;
  for (const std::string& name : names) {
    const fs::path voc = fs::path(dir) / name / "vocals.wav";
    const fs::path acc = fs::path(dir) / name / "accompaniment.wav";
    const bool has_voc = fs::is_regular_file(voc);
    const bool has_acc = fs::is_regular_file(acc);
    if (!has_voc || !has_acc) {
      if (!has_voc) missing += "\n  " + voc.string();
      if (!has_acc) missing += "\n  " + acc.string();
      continue;
    }
    TrackPair pair;
    pair.track_id = name;
    pair.vocals = ReadWav(voc.string());
    pair.accompaniment = ReadWav(acc.string());
    if (pair.vocals.Length() != pair.accompaniment.Length()) {
      throw DataError("stem length mismatch in track " + name);
    }
    out.push_back(std::move(pair));
  }
  if (!missing.empty()) {
    throw DataError("missing stems (expected <track>/vocals.wav and "
                    "<track>/accompaniment.wav):" + missing);
  }
  if (out.empty()) throw DataError("no track directories found under: " + dir);
  return out;
}

}  // namespace sinedae
