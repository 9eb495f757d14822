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

#include <doctest.h>

#include <cmath>
#include <set>

#include "tsv/rng.hpp"

using tsv::SplitMix64;

TEST_CASE("sequence is a pure function of the seed") {
    SplitMix64 a(42), b(42);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("golden values pin the cross-platform sequence") {
    // SplitMix64 with seed 0: mix(gamma), mix(2*gamma), ... These are the
    // published reference outputs of the standard construction.
    SplitMix64 rng(0);
    CHECK(rng.next_u64() == 0xE220A8397B1DCDAFULL);
    CHECK(rng.next_u64() == 0x6E789E6AA1B965F4ULL);
    CHECK(rng.next_u64() == 0x06C45D188009454FULL);
}

TEST_CASE("doubles live in [0, 1)") {
    SplitMix64 rng(7);
    for (int i = 0; i < 1000; ++i) {
        double u = rng.next_double();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("derived streams do not collide") {
    std::set<std::uint64_t> firsts;
    for (std::uint64_t s = 0; s < 100; ++s) {
        firsts.insert(SplitMix64::derive(9, s).next_u64());
    }
    CHECK(firsts.size() == 100);
}

TEST_CASE("gaussians are finite and roughly centered") {
    SplitMix64 rng(3);
    double sum = 0.0, sum2 = 0.0;
    const int n = 10000;
    for (int i = 0; i < n; ++i) {
        double g = rng.next_gaussian();
        REQUIRE(std::isfinite(g));
        sum += g;
        sum2 += g * g;
    }
    CHECK(std::abs(sum / n) < 0.05);
    CHECK(std::abs(sum2 / n - 1.0) < 0.05);
}
