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

#include "sinedae/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace sinedae {

using nlohmann::json;

std::string RegTargetName(RegTarget t) {
  return t == RegTarget::kMix ? "A_m" : "A_v";
}

RegTarget ParseRegTarget(const std::string& name) {
  if (name == "A_m") return RegTarget::kMix;
  if (name == "A_v") return RegTarget::kVocals;
  throw ConfigError("unknown reg_target: " + name + " (expected A_m or A_v)");
}

std::string ConfigToJson(const TrainConfig& cfg) {
  json j;
  j["n"] = cfg.n;
  j["hop"] = cfg.hop;
  j["batch"] = cfg.batch;
  j["epochs"] = cfg.epochs;
  j["lr"] = cfg.lr;
  j["lambda"] = cfg.lambda;
  j["noise_std"] = cfg.noise_std;
  j["reg_target"] = RegTargetName(cfg.reg_target);
  j["seed"] = cfg.seed;
  j["decoder"] = DecoderKindName(cfg.decoder);
  j["squared_freq"] = cfg.squared_freq;
  j["sorting"] = cfg.sorting;
  j["co_permute"] = cfg.co_permute;
  j["early_stop"] = cfg.early_stop;
  j["silence_db"] = cfg.silence_db;
  j["group_tracks"] = cfg.group_tracks;
  j["model"] = {{"channels", cfg.model.channels},
                {"kernel_len", cfg.model.kernel_len},
                {"dilated_len", cfg.model.dilated_len},
                {"stride", cfg.model.stride},
                {"dilation", cfg.model.dilation}};
  return j.dump(2);
}

TrainConfig ConfigFromJson(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");

  static const std::set<std::string> known = {
      "n",       "hop",       "batch",        "epochs",  "lr",
      "lambda",  "noise_std", "reg_target",   "seed",    "decoder",
      "squared_freq", "sorting", "co_permute", "early_stop", "silence_db",
      "group_tracks", "model"};
  static const std::set<std::string> known_model = {"channels", "kernel_len", "dilated_len",
                                                    "stride", "dilation"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (known.find(it.key()) == known.end()) {
      throw ConfigError("unknown config key: " + it.key());
    }
  }

  TrainConfig cfg;
  try {
    if (j.contains("n")) cfg.n = j["n"].get<int>();
    if (j.contains("hop")) cfg.hop = j["hop"].get<int>();
    if (j.contains("batch")) cfg.batch = j["batch"].get<int>();
    if (j.contains("epochs")) cfg.epochs = j["epochs"].get<int>();
    if (j.contains("lr")) cfg.lr = j["lr"].get<double>();
    if (j.contains("lambda")) cfg.lambda = j["lambda"].get<double>();
    if (j.contains("noise_std")) cfg.noise_std = j["noise_std"].get<double>();
    if (j.contains("reg_target")) cfg.reg_target = ParseRegTarget(j["reg_target"].get<std::string>());
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("decoder")) cfg.decoder = ParseDecoderKind(j["decoder"].get<std::string>());
    if (j.contains("squared_freq")) cfg.squared_freq = j["squared_freq"].get<bool>();
    if (j.contains("sorting")) cfg.sorting = j["sorting"].get<bool>();
    if (j.contains("co_permute")) cfg.co_permute = j["co_permute"].get<bool>();
    if (j.contains("early_stop")) cfg.early_stop = j["early_stop"].get<bool>();
    if (j.contains("silence_db")) cfg.silence_db = j["silence_db"].get<double>();
    if (j.contains("group_tracks")) cfg.group_tracks = j["group_tracks"].get<int>();
    if (j.contains("model")) {
      const json& m = j["model"];
      if (!m.is_object()) throw ConfigError("config: model must be an object");
      for (auto it = m.begin(); it != m.end(); ++it) {
        if (known_model.find(it.key()) == known_model.end()) {
          throw ConfigError("unknown config key: model." + it.key());
        }
      }
      if (m.contains("channels")) cfg.model.channels = m["channels"].get<int>();
      if (m.contains("kernel_len")) cfg.model.kernel_len = m["kernel_len"].get<int>();
      if (m.contains("dilated_len")) cfg.model.dilated_len = m["dilated_len"].get<int>();
      if (m.contains("stride")) cfg.model.stride = m["stride"].get<int>();
      if (m.contains("dilation")) cfg.model.dilation = m["dilation"].get<int>();
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config type error: ") + e.what());
  }

  if (cfg.n <= 0 || cfg.hop <= 0 || cfg.hop > cfg.n) {
    throw ConfigError("config: need 0 < hop <= n");
  }
  if (cfg.batch < 1 || cfg.epochs < 1) throw ConfigError("config: batch and epochs must be >= 1");
  if (cfg.lambda < 0.0 || cfg.noise_std < 0.0) {
    throw ConfigError("config: lambda and noise_std must be non-negative");
  }
  if (cfg.group_tracks < 1) throw ConfigError("config: group_tracks must be >= 1");
  return cfg;
}

TrainConfig LoadConfigFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ConfigFromJson(ss.str());
}

std::string ConfigHashHex(const TrainConfig& cfg) {
  return ToHex(Fnv1a64(ConfigToJson(cfg)));
}

}  // namespace sinedae
