// Copyright 2026 The tsvsim Authors
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

#ifndef TSV_RNG_HPP
#define TSV_RNG_HPP

#include <cmath>
#include <cstdint>

namespace tsv {

/// Counter-based SplitMix64 generator.
///
/// Output k is mix(seed + (k+1) * 0x9E3779B97F4A7C15) with the standard
/// SplitMix64 finalizer, so the sequence is a pure function of (seed, counter)
/// and is identical on every platform. Independent streams are derived by
/// hashing (seed, stream index); a stream never shares outputs with another
/// stream of the same seed.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : seed_(seed) {}

    /// Stream `stream` of `seed`; stream 0 is not the same as SplitMix64(seed).
    static SplitMix64 derive(std::uint64_t seed, std::uint64_t stream) {
        return SplitMix64(mix(seed ^ mix(stream + kGamma)));
    }

    std::uint64_t next_u64() { return mix(seed_ + (++counter_) * kGamma); }

    /// Uniform in [0, 1) with 53 random mantissa bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller; consumes exactly two uniforms.
    double next_gaussian() {
        double u1 = next_double();
        double u2 = next_double();
        // Map u1 into (0, 1] so the log is finite.
        double r = std::sqrt(-2.0 * std::log(1.0 - u1));
        return r * std::cos(6.283185307179586476925286766559 * u2);
    }

    std::uint64_t counter() const { return counter_; }

  private:
    static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

    static std::uint64_t mix(std::uint64_t x) {
        x ^= x >> 30;
        x *= 0xBF58476D1CE4E5B9ULL;
        x ^= x >> 27;
        x *= 0x94D049BB133111EBULL;
        x ^= x >> 31;
        return x;
    }

    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
};

}  // namespace tsv

#endif  // TSV_RNG_HPP
