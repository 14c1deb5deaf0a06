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

#ifndef SINEDAE_TRAINING_HPP_
#define SINEDAE_TRAINING_HPP_

#include <iosfwd>
#include <string>
#include <vector>

#include "sinedae/config.hpp"
#include "sinedae/corpus.hpp"
#include "sinedae/losses.hpp"
#include "sinedae/model.hpp"
#include "sinedae/rng.hpp"

namespace sinedae {

struct AdamState {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  long step = 0;
  std::vector<Matrix> m;  // first moments, aligned with TrainableParams
  std::vector<Matrix> v;  // second moments
};

void InitAdam(AdamState& state, Model& model);

/// One bias-corrected Adam update over all trainable parameters.
void AdamUpdate(Model& model, const std::vector<Matrix>& grads, AdamState& state, double lr);

/// x + n with n ~ N(0, sigma^2) i.i.d.; sigma is independent of the
/// signal's amplitude. Deterministic given the generator state.
std::vector<double> CorruptGaussian(const std::vector<double>& x, double sigma, Rng& rng);

/// Sample-wise sum at unit gains.
std::vector<double> CorruptMix(const std::vector<double>& vocals,
                               const std::vector<double>& accompaniment);

/// True iff the last epoch's mean reconstruction loss failed to decrease
/// relative to the previous epoch's.
bool ShouldEarlyStop(const std::vector<double>& epoch_neg_snr);

struct TrainItem {
  std::vector<double> clean;  // x_v
  std::vector<double> noisy;  // x_v + Gaussian noise
  std::vector<double> mixed;  // x_v + accompaniment
};

/// One optimization step on a batch: encodes both corrupted signals,
/// decodes the vocal representation only, takes the batch-mean objective,
/// applies Adam, then re-sorts the kernel bank when sorting is enabled.
/// Throws NumericError (with parameter norms) on a non-finite loss.
LossBreakdown TrainStep(Model& model, AdamState& adam, const std::vector<TrainItem>& batch,
                        const TrainConfig& cfg);

struct TrainResult {
  Model model;
  std::vector<double> epoch_neg_snr;
  std::vector<double> epoch_total;
  int epochs_run = 0;
  long steps = 0;
  std::string best_path;  // empty when out_dir is empty
  std::string last_path;
};

/// Full training run over a corpus of stem pairs. Writes per-epoch
/// checkpoints, a best-loss snapshot, checkpoint_last.ckpt and a line-JSON
/// training log under out_dir (pass "" to keep everything in memory).
/// Optional progress stream receives one line per epoch.
TrainResult Train(const std::vector<TrackPair>& corpus, const TrainConfig& cfg,
                  const std::string& out_dir, std::ostream* progress = nullptr);

}  // namespace sinedae

#endif  // SINEDAE_TRAINING_HPP_
