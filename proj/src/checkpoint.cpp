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

#include "sinedae/checkpoint.hpp"

#include <cstring>
#include <fstream>

#include <json.hpp>

namespace sinedae {

using nlohmann::json;

namespace {

constexpr char kMagic[8] = {'S', 'D', 'A', 'E', 'C', 'K', 'P', '1'};

void PutU64(std::ofstream& out, std::uint64_t v) {
  char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(buf, 8);
}

std::uint64_t GetU64(std::ifstream& in, const std::string& path) {
  unsigned char buf[8];
  in.read(reinterpret_cast<char*>(buf), 8);
  if (!in) throw FormatError("truncated checkpoint: " + path);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
  return v;
}

}  // namespace

void SaveCheckpoint(const std::string& path, const Model& model, const CheckpointMeta& meta) {
  json manifest;
  manifest["format"] = "sinedae-checkpoint";
  manifest["version"] = 1;
  manifest["epoch"] = meta.epoch;
  manifest["neg_snr_history"] = meta.neg_snr_history;
  manifest["total_history"] = meta.total_history;
  manifest["seed"] = meta.config.seed;
  manifest["config"] = json::parse(ConfigToJson(meta.config));
  manifest["config_hash"] =
      meta.config_hash.empty() ? ConfigHashHex(meta.config) : meta.config_hash;
  const std::string text = manifest.dump(2);

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write checkpoint: " + path);
  out.write(kMagic, 8);
  PutU64(out, text.size());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));

  Model& m = const_cast<Model&>(model);
  const std::vector<ParamRef> params = TrainableParams(m);
  std::uint64_t count = 0;
  for (const ParamRef& p : params) count += p.value->Size();
  PutU64(out, count);
  for (const ParamRef& p : params) {
    out.write(reinterpret_cast<const char*>(p.value->data.data()),
              static_cast<std::streamsize>(p.value->Size() * sizeof(double)));
  }
  if (!out) throw IoError("checkpoint write failed: " + path);
}

Model LoadCheckpoint(const std::string& path, CheckpointMeta* meta) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint: " + path);

  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kMagic, 8) != 0) {
    throw FormatError("not a sinedae checkpoint: " + path);
  }
  const std::uint64_t text_len = GetU64(in, path);
  std::string text(text_len, '\0');
  in.read(text.data(), static_cast<std::streamsize>(text_len));
  if (!in) throw FormatError("truncated checkpoint manifest: " + path);

  json manifest;
  try {
    manifest = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("bad checkpoint manifest: ") + e.what());
  }

  CheckpointMeta local;
  local.config = ConfigFromJson(manifest.at("config").dump());
  local.epoch = manifest.value("epoch", 0);
  if (manifest.contains("neg_snr_history")) {
    local.neg_snr_history = manifest["neg_snr_history"].get<std::vector<double>>();
  }
  if (manifest.contains("total_history")) {
    local.total_history = manifest["total_history"].get<std::vector<double>>();
  }
  local.config_hash = manifest.value("config_hash", "");

  Model model = InitModel(local.config.model, local.config.decoder, local.config.squared_freq,
                          local.config.seed);
  const std::vector<ParamRef> params = TrainableParams(model);
  std::uint64_t expected = 0;
  for (const ParamRef& p : params) expected += p.value->Size();
  const std::uint64_t stored = GetU64(in, path);
  if (stored != expected) {
    throw FormatError("checkpoint parameter count mismatch: " + path);
  }
  for (const ParamRef& p : params) {
    in.read(reinterpret_cast<char*>(p.value->data.data()),
            static_cast<std::streamsize>(p.value->Size() * sizeof(double)));
  }
  if (!in) throw FormatError("truncated checkpoint blob: " + path);
  for (const ParamRef& p : params) {
    if (!p.value->AllFinite()) throw FormatError("non-finite parameters in checkpoint: " + path);
  }

  if (meta != nullptr) *meta = std::move(local);
  return model;
}

}  // namespace sinedae
