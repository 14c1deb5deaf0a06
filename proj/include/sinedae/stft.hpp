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

#ifndef SINEDAE_STFT_HPP_
#define SINEDAE_STFT_HPP_

#include <complex>
#include <vector>

#include "sinedae/common.hpp"

namespace sinedae {

struct StftConfig {
  int window = 2048;  // power of two
  int hop = 384;
};

/// Frame-wise half spectra (Hermitian symmetry exploited: window/2 + 1
/// unique bins per frame).
struct Spectrogram {
  StftConfig config;
  int signal_len = 0;  // for inverse cropping
  int frames = 0;
  std::vector<std::complex<double>> bins;  // frames x (window/2+1), row-major

  int BinsPerFrame() const { return config.window / 2 + 1; }
  std::complex<double>& At(int frame, int bin) { return bins[static_cast<std::size_t>(frame) * BinsPerFrame() + bin]; }
  std::complex<double> At(int frame, int bin) const { return bins[static_cast<std::size_t>(frame) * BinsPerFrame() + bin]; }
};

/// Periodic Hamming window of length n.
std::vector<double> HammingWindow(int n);

/// In-place iterative radix-2 FFT; size must be a power of two.
void Fft(std::vector<std::complex<double>>& a, bool inverse);

/// Hamming-windowed analysis. The signal is zero-padded on the right to the
/// frame grid; frame f starts at f*hop. Throws ConfigError for non-power-
/// of-two windows or hop <= 0.
Spectrogram ComputeStft(const std::vector<double>& x, const StftConfig& config);

/// Weighted overlap-add synthesis: synthesis window = analysis window,
/// normalized by the summed squared window with a 1e-8 floor at the edges.
/// Interior samples (beyond one window of each edge) reconstruct to machine
/// precision.
std::vector<double> InverseStft(const Spectrogram& s);

/// Ideal-binary-mask baseline: the mask |V| > |Acc| on magnitude spectra
/// (ties to 0) is applied to the complex STFT of the sample-wise mixture
/// vocals + accompaniment, then inverted.
std::vector<double> StftMaskBaseline(const std::vector<double>& vocals,
                                     const std::vector<double>& accompaniment,
                                     const StftConfig& config);

}  // namespace sinedae

#endif  // SINEDAE_STFT_HPP_
