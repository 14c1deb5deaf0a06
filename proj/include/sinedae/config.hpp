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

#ifndef SINEDAE_CONFIG_HPP_
#define SINEDAE_CONFIG_HPP_

#include <cstdint>
#include <string>

#include "sinedae/model.hpp"

namespace sinedae {

enum class RegTarget { kMix, kVocals };  // which representation feeds the TV term

std::string RegTargetName(RegTarget t);     // "A_m" / "A_v"
RegTarget ParseRegTarget(const std::string& name);

// Training protocol configuration. Defaults mirror the reference recipe:
// one-second segments with half overlap, batches of 8, Adam at 1e-4,
// 10 epochs, lambda = 0.5, Gaussian sigma = 1e-4.
struct TrainConfig {
  int n = 44100;
  int hop = 22050;
  int batch = 8;
  int epochs = 10;
  double lr = 1e-4;
  double lambda = 0.5;
  double noise_std = 1e-4;
  RegTarget reg_target = RegTarget::kMix;
  std::uint64_t seed = 0;

  DecoderKind decoder = DecoderKind::kModCos;
  bool squared_freq = true;
  bool sorting = true;
  bool co_permute = true;  // co-permute encoder channels when sorting
  bool early_stop = true;

  double silence_db = -60.0;
  int group_tracks = 4;
  ModelHyper model;
};

/// Canonical JSON text (sorted keys, full precision); hashing this string
/// yields the config hash used in manifests and reports.
std::string ConfigToJson(const TrainConfig& cfg);

/// Strict parse: unknown keys are rejected. Missing keys keep defaults.
TrainConfig ConfigFromJson(const std::string& json_text);

TrainConfig LoadConfigFile(const std::string& path);

std::string ConfigHashHex(const TrainConfig& cfg);

}  // namespace sinedae

#endif  // SINEDAE_CONFIG_HPP_
