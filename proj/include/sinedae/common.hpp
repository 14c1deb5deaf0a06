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

#ifndef SINEDAE_COMMON_HPP_
#define SINEDAE_COMMON_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace sinedae {

// Error taxonomy. The CLI maps these onto exit codes:
//   ConfigError -> 2, FormatError/IoError/DataError -> 3, NumericError -> 4.
struct DimensionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct StateError : std::logic_error {
  using std::logic_error::logic_error;
};

/// FNV-1a 64-bit hash; used as a cheap identity tag for configs and
/// checkpoint files (not a cryptographic digest).
inline std::uint64_t Fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= static_cast<std::uint64_t>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string ToHex(std::uint64_t value);

/// Hash of an entire file's bytes. Throws IoError if unreadable.
std::uint64_t HashFile(const std::string& path);

/// Applies the SINE_DAE_THREADS cap to the OpenMP runtime if the variable is
/// set to a positive integer. Returns the cap, or 0 when unset/invalid.
int ApplyThreadCapFromEnv();

}  // namespace sinedae

#endif  // SINEDAE_COMMON_HPP_
