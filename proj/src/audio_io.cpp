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

#include "sinedae/audio_io.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

namespace sinedae {
namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;

std::uint32_t ReadU32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t ReadU16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void PutU32(std::string& out, std::uint32_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
  out.push_back(static_cast<char>((v >> 16) & 0xff));
  out.push_back(static_cast<char>((v >> 24) & 0xff));
}

void PutU16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
}

struct FmtChunk {
  std::uint16_t format = 0;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t bits = 0;
  bool seen = false;
};

}  // namespace

Waveform ReadWav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open WAV file: " + path);
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const unsigned char* p = reinterpret_cast<const unsigned char*>(bytes.data());
  const std::size_t size = bytes.size();

  if (size < 12 || std::memcmp(p, "RIFF", 4) != 0 || std::memcmp(p + 8, "WAVE", 4) != 0) {
    throw FormatError("not a RIFF/WAVE file: " + path);
  }

  FmtChunk fmt;
  const unsigned char* data = nullptr;
  std::size_t data_len = 0;

  std::size_t pos = 12;
  while (pos + 8 <= size) {
    const char* id = reinterpret_cast<const char*>(p + pos);
    const std::uint32_t chunk_len = ReadU32(p + pos + 4);
    pos += 8;
    if (pos + chunk_len > size) throw FormatError("truncated chunk in WAV file: " + path);
    if (std::memcmp(id, "fmt ", 4) == 0) {
      if (chunk_len < 16) throw FormatError("fmt chunk too short: " + path);
      fmt.format = ReadU16(p + pos);
      fmt.channels = ReadU16(p + pos + 2);
      fmt.sample_rate = ReadU32(p + pos + 4);
      fmt.bits = ReadU16(p + pos + 14);
      fmt.seen = true;
    } else if (std::memcmp(id, "data", 4) == 0) {
      data = p + pos;
      data_len = chunk_len;
    }
    pos += chunk_len + (chunk_len & 1);  // chunks are word-aligned
  }

  if (!fmt.seen) throw FormatError("missing fmt chunk: " + path);
  if (data == nullptr) throw FormatError("missing data chunk: " + path);
  if (fmt.channels < 1 || fmt.channels > 2) {
    throw FormatError("unsupported channel count " + std::to_string(fmt.channels) + ": " + path);
  }
  const bool pcm16 = fmt.format == kFormatPcm && fmt.bits == 16;
  const bool pcm24 = fmt.format == kFormatPcm && fmt.bits == 24;
  const bool f32 = fmt.format == kFormatFloat && fmt.bits == 32;
  if (!pcm16 && !pcm24 && !f32) {
    throw FormatError("unsupported codec (format " + std::to_string(fmt.format) + ", " +
                      std::to_string(fmt.bits) + " bits): " + path);
  }
  if (fmt.sample_rate == 0) throw FormatError("zero sample rate: " + path);

  const std::size_t bytes_per_sample = fmt.bits / 8;
  const std::size_t frame_bytes = bytes_per_sample * fmt.channels;
  const std::size_t frames = frame_bytes == 0 ? 0 : data_len / frame_bytes;

  Waveform w;
  w.sample_rate = static_cast<int>(fmt.sample_rate);
  w.samples.resize(frames);

  for (std::size_t i = 0; i < frames; ++i) {
    float acc = 0.0f;
    for (unsigned ch = 0; ch < fmt.channels; ++ch) {
      const unsigned char* s = data + i * frame_bytes + ch * bytes_per_sample;
      float v = 0.0f;
      if (pcm16) {
        const std::int16_t raw = static_cast<std::int16_t>(s[0] | (s[1] << 8));
        v = static_cast<float>(raw) / 32768.0f;
      } else if (pcm24) {
        std::int32_t raw = s[0] | (s[1] << 8) | (s[2] << 16);
        if (raw & 0x800000) raw |= ~0xffffff;  // sign-extend
        v = static_cast<float>(raw) / 8388608.0f;
      } else {
        float f;
        std::memcpy(&f, s, 4);
        if (!std::isfinite(f)) throw FormatError("non-finite float sample in: " + path);
        v = f;
      }
      acc += v;
    }
    w.samples[i] = acc / static_cast<float>(fmt.channels);
  }
  return w;
}

WriteStats WriteWav(const std::string& path, const Waveform& w, WavBits bits) {
  WriteStats stats;
  const std::uint16_t channels = 1;
  std::uint16_t format = kFormatPcm;
  std::uint16_t bit_count = 16;
  switch (bits) {
    case WavBits::k16: bit_count = 16; break;
    case WavBits::k24: bit_count = 24; break;
    case WavBits::kFloat32:
      format = kFormatFloat;
      bit_count = 32;
      break;
  }
  const std::uint32_t bytes_per_sample = bit_count / 8;
  const std::uint32_t data_len = static_cast<std::uint32_t>(w.samples.size() * bytes_per_sample);

  std::string out;
  out.reserve(44 + data_len);
  out.append("RIFF");
  PutU32(out, 36 + data_len);
  out.append("WAVE");
  out.append("fmt ");
  PutU32(out, 16);
  PutU16(out, format);
  PutU16(out, channels);
  PutU32(out, static_cast<std::uint32_t>(w.sample_rate));
  PutU32(out, static_cast<std::uint32_t>(w.sample_rate) * bytes_per_sample);
  PutU16(out, static_cast<std::uint16_t>(bytes_per_sample));
  PutU16(out, bit_count);
  out.append("data");
  PutU32(out, data_len);

  for (float x : w.samples) {
    if (!std::isfinite(x)) throw DataError("non-finite sample on write: " + path);
    if (bits == WavBits::kFloat32) {
      char buf[4];
      std::memcpy(buf, &x, 4);
      out.append(buf, 4);
      continue;
    }
    const double full_scale = bits == WavBits::k16 ? 32768.0 : 8388608.0;
    const long max_code = static_cast<long>(full_scale) - 1;
    const long min_code = -static_cast<long>(full_scale);
    long code = std::lround(static_cast<double>(x) * full_scale);
    if (code > max_code) {
      code = max_code;
      ++stats.clipped;
    } else if (code < min_code) {
      code = min_code;
      ++stats.clipped;
    }
    out.push_back(static_cast<char>(code & 0xff));
    out.push_back(static_cast<char>((code >> 8) & 0xff));
    if (bits == WavBits::k24) out.push_back(static_cast<char>((code >> 16) & 0xff));
  }

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open for writing: " + path);
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw IoError("write failed: " + path);
  return stats;
}

std::vector<float> Downmix(const std::vector<float>& left, const std::vector<float>& right) {
  if (left.size() != right.size()) throw DimensionError("downmix: channel length mismatch");
  std::vector<float> out(left.size());
  for (std::size_t i = 0; i < left.size(); ++i) out[i] = 0.5f * (left[i] + right[i]);
  return out;
}

SegmentSet Segment(const Waveform& w, int n, int hop, bool pad_last, SourceTag tag) {
  if (n <= 0) throw ConfigError("segment length must be positive");
  if (hop <= 0 || hop > n) throw ConfigError("segment hop must satisfy 0 < hop <= n");
  SegmentSet set;
  set.hop = hop;
  set.source_tag = tag;
  const std::size_t len = w.Length();
  for (std::size_t start = 0; start < len; start += static_cast<std::size_t>(hop)) {
    const std::size_t end = start + static_cast<std::size_t>(n);
    Waveform seg;
    seg.sample_rate = w.sample_rate;
    if (end <= len) {
      seg.samples.assign(w.samples.begin() + static_cast<std::ptrdiff_t>(start),
                         w.samples.begin() + static_cast<std::ptrdiff_t>(end));
    } else {
      if (!pad_last) break;
      seg.samples.assign(w.samples.begin() + static_cast<std::ptrdiff_t>(start), w.samples.end());
      seg.samples.resize(static_cast<std::size_t>(n), 0.0f);
    }
    set.segments.push_back(std::move(seg));
  }
  return set;
}

double MeanPowerDb(const Waveform& w) {
  if (w.samples.empty()) return -std::numeric_limits<double>::infinity();
  double acc = 0.0;
  for (float x : w.samples) acc += static_cast<double>(x) * x;
  const double mean = acc / static_cast<double>(w.samples.size());
  if (mean <= 0.0) return -std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(mean);
}

bool IsSilent(const Waveform& w, double threshold_db) {
  return MeanPowerDb(w) < threshold_db;
}

}  // namespace sinedae
