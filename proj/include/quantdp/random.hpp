//
// Copyright 2026 The quantdp Authors
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
//

#ifndef QUANTDP_RANDOM_HPP_
#define QUANTDP_RANDOM_HPP_

#include <cstdint>
#include <limits>

namespace quantdp {

enum class StreamPurpose : std::uint64_t {
  kQuantizer = 1,
  kInputNoise = 2,
  kAuxiliary = 3,
};

// Counter-based generator. Each (seed, purpose, run, step, component) tuple
// selects an independent stream, so any ensemble member can be regenerated
// without replaying the others. Output i of a stream is the splitmix64
// finalizer applied to key + (i + 1) * golden-ratio increment.
class Substream {
 public:
  using result_type = std::uint64_t;

  Substream(std::uint64_t seed, StreamPurpose purpose, std::uint64_t run,
            std::uint64_t step, std::uint64_t component)
      : key_(derive_key(seed, purpose, run, step, component)) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() {
    ++counter_;
    return finalize(key_ + counter_ * kGolden);
  }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

 private:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

  static constexpr std::uint64_t finalize(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  static constexpr std::uint64_t absorb(std::uint64_t h, std::uint64_t v) {
    return finalize(h ^ finalize(v + kGolden));
  }

  static constexpr std::uint64_t derive_key(std::uint64_t seed,
                                            StreamPurpose purpose,
                                            std::uint64_t run,
                                            std::uint64_t step,
                                            std::uint64_t component) {
    std::uint64_t h = finalize(seed);
    h = absorb(h, static_cast<std::uint64_t>(purpose));
    h = absorb(h, run);
    h = absorb(h, step);
    return absorb(h, component);
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace quantdp

#endif  // QUANTDP_RANDOM_HPP_
