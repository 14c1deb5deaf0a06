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

#include "sinedae/stft.hpp"

#include <cmath>

namespace sinedae {
namespace {

bool IsPowerOfTwo(int n) { return n > 0 && (n & (n - 1)) == 0; }

void ValidateConfig(const StftConfig& c) {
  if (!IsPowerOfTwo(c.window)) throw ConfigError("STFT window must be a power of two");
  if (c.hop <= 0 || c.hop > c.window) throw ConfigError("STFT hop must satisfy 0 < hop <= window");
}

int FrameCount(int len, const StftConfig& c) {
  if (len <= c.window) return 1;
  return (len - c.window + c.hop - 1) / c.hop + 1;
}

}  // namespace

std::vector<double> HammingWindow(int n) {
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) {
    w[i] = 0.54 - 0.46 * std::cos(2.0 * M_PI * i / n);
  }
  return w;
}

void Fft(std::vector<std::complex<double>>& a, bool inverse) {
  const std::size_t n = a.size();
  if (!IsPowerOfTwo(static_cast<int>(n))) throw ConfigError("FFT size must be a power of two");

  // bit-reversal permutation
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }

  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = (inverse ? 2.0 : -2.0) * M_PI / static_cast<double>(len);
    const std::complex<double> wn(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> u = a[i + k];
        const std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wn;
      }
    }
  }
  if (inverse) {
    const double inv = 1.0 / static_cast<double>(n);
    for (auto& x : a) x *= inv;
  }
}

Spectrogram ComputeStft(const std::vector<double>& x, const StftConfig& config) {
  ValidateConfig(config);
  Spectrogram s;
  s.config = config;
  s.signal_len = static_cast<int>(x.size());
  if (x.empty()) return s;

  const int win = config.window;
  const std::vector<double> window = HammingWindow(win);
  s.frames = FrameCount(s.signal_len, config);
  s.bins.assign(static_cast<std::size_t>(s.frames) * s.BinsPerFrame(), {0.0, 0.0});

  std::vector<std::complex<double>> buf(win);
  for (int f = 0; f < s.frames; ++f) {
    const int start = f * config.hop;
    for (int i = 0; i < win; ++i) {
      const int idx = start + i;
      const double v = idx < s.signal_len ? x[idx] : 0.0;
      buf[i] = {v * window[i], 0.0};
    }
    Fft(buf, false);
    for (int k = 0; k <= win / 2; ++k) s.At(f, k) = buf[k];
  }
  return s;
}

std::vector<double> InverseStft(const Spectrogram& s) {
  ValidateConfig(s.config);
  if (s.signal_len == 0) return {};
  const int win = s.config.window;
  const std::vector<double> window = HammingWindow(win);
  const int padded = (s.frames - 1) * s.config.hop + win;

  std::vector<double> out(padded, 0.0);
  std::vector<double> norm(padded, 0.0);
  std::vector<std::complex<double>> buf(win);
  for (int f = 0; f < s.frames; ++f) {
    for (int k = 0; k <= win / 2; ++k) buf[k] = s.At(f, k);
    for (int k = win / 2 + 1; k < win; ++k) buf[k] = std::conj(s.At(f, win - k));
    Fft(buf, true);
    const int start = f * s.config.hop;
    for (int i = 0; i < win; ++i) {
      out[start + i] += buf[i].real() * window[i];
      norm[start + i] += window[i] * window[i];
    }
  }
  out.resize(s.signal_len);
  for (int i = 0; i < s.signal_len; ++i) {
    out[i] /= std::max(norm[i], 1e-8);
  }
  return out;
}

std::vector<double> StftMaskBaseline(const std::vector<double>& vocals,
                                     const std::vector<double>& accompaniment,
                                     const StftConfig& config) {
  if (vocals.size() != accompaniment.size()) {
    throw DimensionError("stft_mask_baseline: stem length mismatch");
  }
  std::vector<double> mixture(vocals.size());
  for (std::size_t i = 0; i < vocals.size(); ++i) mixture[i] = vocals[i] + accompaniment[i];

  const Spectrogram sv = ComputeStft(vocals, config);
  const Spectrogram sa = ComputeStft(accompaniment, config);
  Spectrogram sm = ComputeStft(mixture, config);
  for (std::size_t i = 0; i < sm.bins.size(); ++i) {
    if (!(std::abs(sv.bins[i]) > std::abs(sa.bins[i]))) sm.bins[i] = {0.0, 0.0};
  }
  return InverseStft(sm);
}

}  // namespace sinedae
