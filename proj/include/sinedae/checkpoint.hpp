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

#ifndef SINEDAE_CHECKPOINT_HPP_
#define SINEDAE_CHECKPOINT_HPP_

#include <string>
#include <vector>

#include "sinedae/config.hpp"
#include "sinedae/model.hpp"

namespace sinedae {

// Checkpoint file layout (all little-endian):
//   8 bytes  magic "SDAECKP1"
//   u64      manifest length in bytes
//   ...      manifest JSON (config, epoch, loss history, seed, config hash)
//   u64      parameter count (total doubles)
//   ...      float64 parameter blob in TrainableParams order:
//            conv1, conv2, then freq, phase, env (mod-cos) / freq, phase
//            (cos) / kernels (conv)
struct CheckpointMeta {
  TrainConfig config;
  int epoch = 0;
  std::vector<double> neg_snr_history;  // per-epoch means of the dB term
  std::vector<double> total_history;    // per-epoch means of the full objective
  std::string config_hash;              // hex of the canonical config JSON
};

void SaveCheckpoint(const std::string& path, const Model& model, const CheckpointMeta& meta);

Model LoadCheckpoint(const std::string& path, CheckpointMeta* meta = nullptr);

}  // namespace sinedae

#endif  // SINEDAE_CHECKPOINT_HPP_
