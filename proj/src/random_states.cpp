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

#include "tsv/random_states.hpp"

#include <algorithm>
#include <cmath>

namespace tsv {

namespace {
CMat ginibre(int d, SplitMix64& rng) {
    CMat g(d, d);
    for (int r = 0; r < d; ++r) {
        for (int c = 0; c < d; ++c) {
            g(r, c) = cx(rng.next_gaussian(), rng.next_gaussian());
        }
    }
    return g;
}
}  // namespace

Ket random_ket(std::vector<int> dims, SplitMix64& rng) {
    int d = 1;
    for (int x : dims) d *= x;
    CVec v(d);
    for (int i = 0; i < d; ++i) {
        v(i) = cx(rng.next_gaussian(), rng.next_gaussian());
    }
    v.normalize();
    return Ket(std::move(v), std::move(dims));
}

LinearOp haar_unitary(std::vector<int> dims, SplitMix64& rng) {
    int d = 1;
    for (int x : dims) d *= x;
    Eigen::HouseholderQR<CMat> qr(ginibre(d, rng));
    CMat q = qr.householderQ();
    CMat r = qr.matrixQR().triangularView<Eigen::Upper>();
    // Fix the phase ambiguity so the distribution is Haar.
    for (int i = 0; i < d; ++i) {
        cx diag = r(i, i);
        q.col(i) *= (diag == cx(0.0) ? cx(1.0) : diag / std::abs(diag));
    }
    return LinearOp(std::move(q), std::move(dims));
}

LinearOp random_hermitian(std::vector<int> dims, SplitMix64& rng) {
    int d = 1;
    for (int x : dims) d *= x;
    CMat g = ginibre(d, rng);
    return LinearOp(((g + g.adjoint()) / 2.0).eval(), std::move(dims));
}

Observable random_observable(std::vector<int> dims, int n_outcomes,
                             SplitMix64& rng) {
    int d = 1;
    for (int x : dims) d *= x;
    if (n_outcomes < 1 || n_outcomes > d) {
        throw BadDimension("outcome count must be between 1 and the dimension");
    }

    // Distinct eigenvalues, well separated relative to the grouping tolerance.
    std::vector<double> values;
    const double step = 2.0 / static_cast<double>(n_outcomes);
    for (int i = 0; i < n_outcomes; ++i) {
        values.push_back(-1.0 + step * (static_cast<double>(i) +
                                        0.25 + 0.5 * rng.next_double()));
    }

    // Random eigenspace dimensions summing to d, each >= 1.
    std::vector<int> ranks(static_cast<std::size_t>(n_outcomes), 1);
    for (int extra = d - n_outcomes; extra > 0; --extra) {
        ranks[static_cast<std::size_t>(rng.next_u64() %
                                       static_cast<std::uint64_t>(n_outcomes))]++;
    }

    const LinearOp u = haar_unitary(dims, rng);
    std::vector<LinearOp> projectors;
    int col = 0;
    for (int i = 0; i < n_outcomes; ++i) {
        CMat block = u.matrix.middleCols(col, ranks[static_cast<std::size_t>(i)]);
        projectors.emplace_back((block * block.adjoint()).eval(), dims);
        col += ranks[static_cast<std::size_t>(i)];
    }
    return Observable::from_projectors(std::move(values), std::move(projectors));
}

}  // namespace tsv
