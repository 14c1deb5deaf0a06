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

#include "sinedae/synth_data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <vector>

namespace sinedae {
namespace {

constexpr double kTwoPi = 2.0 * M_PI;
constexpr double kPeakTarget = 0.65;  // headroom below the 0.9 ceiling

void PeakNormalize(std::vector<float>& x, double peak) {
  float max_abs = 0.0f;
  for (float v : x) max_abs = std::max(max_abs, std::fabs(v));
  if (max_abs <= 0.0f) return;
  const float g = static_cast<float>(peak) / max_abs;
  for (float& v : x) v *= g;
}

/// Raised-cosine fade of `ramp` samples at both ends of [0, len).
double PhraseEnvelope(int i, int len, int ramp) {
  if (i < ramp) return 0.5 - 0.5 * std::cos(M_PI * i / ramp);
  if (i >= len - ramp) return 0.5 - 0.5 * std::cos(M_PI * (len - 1 - i) / ramp);
  return 1.0;
}

/// Windowed-sinc band-pass FIR, odd length, normalized cutoffs in cycles
/// per sample.
std::vector<double> BandPassFir(int taps, double f_lo, double f_hi) {
  std::vector<double> h(taps);
  const int mid = taps / 2;
  for (int i = 0; i < taps; ++i) {
    const int k = i - mid;
    const double lp_hi = k == 0 ? 2.0 * f_hi : std::sin(kTwoPi * f_hi * k) / (M_PI * k);
    const double lp_lo = k == 0 ? 2.0 * f_lo : std::sin(kTwoPi * f_lo * k) / (M_PI * k);
    const double hamming = 0.54 - 0.46 * std::cos(kTwoPi * i / (taps - 1));
    h[i] = (lp_hi - lp_lo) * hamming;
  }
  return h;
}

}  // namespace

Waveform SynthVocalTrack(Rng& rng, int samples, int sample_rate) {
  Waveform w;
  w.sample_rate = sample_rate;
  w.samples.assign(samples, 0.0f);

  const double sr = sample_rate;
  int pos = static_cast<int>(rng.Uniform(0.0, 0.2) * sr);  // lead-in silence
  while (pos < samples) {
    const int phrase_len = static_cast<int>(rng.Uniform(1.2, 2.5) * sr);
    const int len = std::min(phrase_len, samples - pos);
    const int harmonics = static_cast<int>(rng.UniformInt(3, 8));
    const double f0 = rng.Uniform(100.0, 400.0);
    const double rolloff = rng.Uniform(0.8, 1.6);
    const double vib_rate = rng.Uniform(4.5, 6.5);       // Hz
    const double vib_depth = rng.Uniform(0.003, 0.008);  // relative deviation
    const double trem_rate = rng.Uniform(1.5, 4.0);
    const double trem_phase = rng.Uniform(0.0, kTwoPi);
    const int ramp = std::min(len / 4, static_cast<int>(0.12 * sr));

    std::vector<double> amp(harmonics);
    std::vector<double> theta(harmonics);
    for (int k = 0; k < harmonics; ++k) {
      amp[k] = std::pow(k + 1.0, -rolloff);
      theta[k] = rng.Uniform(0.0, kTwoPi);
    }

    for (int i = 0; i < len; ++i) {
      const double t = i / sr;
      const double f_inst = f0 * (1.0 + vib_depth * std::sin(kTwoPi * vib_rate * t));
      const double env = PhraseEnvelope(i, len, std::max(1, ramp)) *
                         (0.85 + 0.15 * std::sin(kTwoPi * trem_rate * t + trem_phase));
      double acc = 0.0;
      for (int k = 0; k < harmonics; ++k) {
        theta[k] += kTwoPi * (k + 1) * f_inst / sr;
        acc += amp[k] * std::sin(theta[k]);
      }
      w.samples[pos + i] += static_cast<float>(env * acc);
    }
    pos += len + static_cast<int>(rng.Uniform(0.3, 0.8) * sr);  // inter-phrase silence
  }

  PeakNormalize(w.samples, kPeakTarget);
  return w;
}

Waveform SynthAccompanimentTrack(Rng& rng, int samples, int sample_rate) {
  Waveform w;
  w.sample_rate = sample_rate;
  w.samples.assign(samples, 0.0f);
  const double sr = sample_rate;

  // low-frequency tone line: back-to-back notes in [40, 95] Hz
  std::vector<double> bass(samples, 0.0);
  int pos = 0;
  while (pos < samples) {
    const int note_len = static_cast<int>(rng.Uniform(0.4, 0.9) * sr);
    const int len = std::min(note_len, samples - pos);
    const double f = rng.Uniform(40.0, 95.0);
    const double phase = rng.Uniform(0.0, kTwoPi);
    const int ramp = std::min(len / 4, static_cast<int>(0.03 * sr));
    for (int i = 0; i < len; ++i) {
      bass[pos + i] = PhraseEnvelope(i, len, std::max(1, ramp)) *
                      std::sin(kTwoPi * f * i / sr + phase);
    }
    pos += len;
  }

  // broadband layer: white noise band-passed to [0.11, 0.20] of the sample
  // rate (5-9 kHz at 44100), well above the vocal harmonics
  std::vector<double> noise(samples);
  for (double& v : noise) v = rng.Uniform(-1.0, 1.0);
  const std::vector<double> fir = BandPassFir(257, 0.11, 0.20);
  const int mid = static_cast<int>(fir.size()) / 2;
  std::vector<double> filtered(samples, 0.0);
  for (int i = 0; i < samples; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < fir.size(); ++j) {
      const int idx = i + mid - static_cast<int>(j);
      if (idx < 0 || idx >= samples) continue;
      acc += fir[j] * noise[idx];
    }
    filtered[i] = acc;
  }
  // slow amplitude movement on the noise bed
  const double noise_lfo = rng.Uniform(0.2, 0.6);
  const double noise_lfo_phase = rng.Uniform(0.0, kTwoPi);

  double bass_rms = 0.0;
  double noise_rms = 0.0;
  for (int i = 0; i < samples; ++i) {
    bass_rms += bass[i] * bass[i];
    noise_rms += filtered[i] * filtered[i];
  }
  bass_rms = std::sqrt(bass_rms / samples);
  noise_rms = std::sqrt(noise_rms / samples);
  const double bass_gain = bass_rms > 0.0 ? 0.5 / bass_rms : 0.0;
  const double noise_gain = noise_rms > 0.0 ? 0.5 / noise_rms : 0.0;

  for (int i = 0; i < samples; ++i) {
    const double lfo = 0.8 + 0.2 * std::sin(kTwoPi * noise_lfo * i / sr + noise_lfo_phase);
    w.samples[i] = static_cast<float>(bass_gain * bass[i] + noise_gain * lfo * filtered[i]);
  }
  PeakNormalize(w.samples, kPeakTarget);
  return w;
}

void GenerateCorpus(const std::string& out_dir, const SynthSpec& spec) {
  namespace fs = std::filesystem;
  if (spec.tracks < 1 || spec.train_split < 0 || spec.train_split > spec.tracks) {
    throw ConfigError("synth corpus: invalid track counts");
  }
  const int samples = static_cast<int>(spec.duration_s * spec.sample_rate);

  for (int t = 0; t < spec.tracks; ++t) {
    const char* split = t < spec.train_split ? "train" : "test";
    char name[32];
    std::snprintf(name, sizeof(name), "track%02d", t + 1);
    const fs::path dir = fs::path(out_dir) / split / name;
    fs::create_directories(dir);

    Rng voc_rng(MixSeed(spec.seed, 0x766f63ULL, static_cast<std::uint64_t>(t)));
    Rng acc_rng(MixSeed(spec.seed, 0x616363ULL, static_cast<std::uint64_t>(t)));
    const Waveform vocals = SynthVocalTrack(voc_rng, samples, spec.sample_rate);
    const Waveform acc = SynthAccompanimentTrack(acc_rng, samples, spec.sample_rate);
    WriteWav((dir / "vocals.wav").string(), vocals, WavBits::kFloat32);
    WriteWav((dir / "accompaniment.wav").string(), acc, WavBits::kFloat32);
  }
}

}  // namespace sinedae
