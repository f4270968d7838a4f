// Copyright 2026 The gramhmm Authors
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

#ifndef GRAMHMM_RNG_HPP_
#define GRAMHMM_RNG_HPP_

#include <cstdint>
#include <random>

namespace gramhmm {

/// Identifies one reproducible random stream: identical (seed, stream)
/// pairs yield identical sequences.
struct RngSeed {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

/// mt19937_64 keyed by a splitmix64 hash of (seed, stream). Deviates are
/// produced from raw 64-bit words so results do not depend on the standard
/// library's distribution implementations.
class Rng {
 public:
  explicit Rng(RngSeed seed);

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace gramhmm

#endif  // GRAMHMM_RNG_HPP_
