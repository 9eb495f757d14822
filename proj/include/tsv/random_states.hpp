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

#ifndef TSV_RANDOM_STATES_HPP
#define TSV_RANDOM_STATES_HPP

#include "tsv/linalg.hpp"
#include "tsv/rng.hpp"

namespace tsv {

/// Haar-random normalized ket (Gaussian components, normalized).
Ket random_ket(std::vector<int> dims, SplitMix64& rng);

/// Haar-random unitary (QR of a Ginibre matrix with phase-fixed R diagonal).
LinearOp haar_unitary(std::vector<int> dims, SplitMix64& rng);

/// GUE-style random Hermitian operator.
LinearOp random_hermitian(std::vector<int> dims, SplitMix64& rng);

/// Random observable with the given number of distinct eigenvalues spread in
/// [-1, 1] (gap > 10 * grouping tolerance), eigenspace dimensions drawn at
/// random. n_outcomes == dim gives a nondegenerate observable.
Observable random_observable(std::vector<int> dims, int n_outcomes,
                             SplitMix64& rng);

}  // namespace tsv

#endif  // TSV_RANDOM_STATES_HPP
