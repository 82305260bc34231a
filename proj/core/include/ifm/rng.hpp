// Copyright 2026 The IFM Simulator Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef IFM_RNG_HPP
#define IFM_RNG_HPP

#include <cstdint>
#include <random>

namespace ifm {

/// Explicitly seeded random stream. The library never owns global randomness;
/// every stochastic operation takes one of these by reference.
///
/// std::mt19937_64 has a standard-mandated output sequence, and uniform()
/// builds doubles from raw bits, so a seed reproduces identical draws on
/// every conforming standard library.
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed) : engine_(seed) {}

    /// Independent stream for sub-task `index` of a run seeded with `seed`.
    static RngStream derived(std::uint64_t seed, std::uint64_t index);

    std::uint64_t next() { return engine_(); }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  private:
    std::mt19937_64 engine_;
};

/// SplitMix64 finalizer; used to decorrelate derived seeds.
std::uint64_t mix_seed(std::uint64_t x);

}  // namespace ifm

#endif  // IFM_RNG_HPP
