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

#include "tsv/states.hpp"

#include <cmath>
#include <utility>

namespace tsv {

namespace {
void require_normalized(const Ket& k, const char* what) {
    if (!k.is_normalized()) {
        throw NotNormalized(std::string(what) + " must be normalized");
    }
}
}  // namespace

ForwardState::ForwardState(Ket k) : ket(std::move(k)) {
    require_normalized(ket, "forward state");
}

BackwardState::BackwardState(Ket k) : ket(std::move(k)) {
    require_normalized(ket, "backward state");
}

cx bra_ket(const BackwardState& b, const ForwardState& f) {
    if (b.dims() != f.dims()) {
        throw DimMismatch("bra_ket: state dims differ");
    }
    return inner(b.ket.amplitudes, f.ket.amplitudes);
}

TwoStateVector::TwoStateVector(BackwardState b, ForwardState f)
    : backward(std::move(b)), forward(std::move(f)) {
    if (backward.dims() != forward.dims()) {
        throw DimMismatch("two-state vector components have different dims");
    }
    if (std::abs(bra_ket(backward, forward)) <= kNormTol) {
        throw InconsistentSelection(
            "two-state vector with orthogonal components describes an empty "
            "pre/post-selected ensemble");
    }
}

DensityOp::DensityOp(LinearOp o) : op(std::move(o)) {
    if (!op.is_hermitian()) throw NotHermitian("density operator not Hermitian");
    if (std::abs(op.matrix.trace().real() - 1.0) > kHermTol ||
        std::abs(op.matrix.trace().imag()) > kHermTol) {
        throw Error("density operator trace differs from 1");
    }
    Eigen::SelfAdjointEigenSolver<CMat> solver(op.matrix,
                                               Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < -kHermTol) {
        throw Error("density operator has a negative eigenvalue");
    }
}

DensityOp DensityOp::from_ket(const Ket& k) {
    require_normalized(k, "density operator ket");
    return DensityOp(LinearOp::outer(k));
}

DensityOp DensityOp::maximally_mixed(std::vector<int> dims) {
    LinearOp id = LinearOp::identity(std::move(dims));
    id.matrix /= static_cast<double>(id.dim());
    return DensityOp(std::move(id));
}

ForwardState maximally_entangled(int d) {
    if (d < 2) throw BadDimension("maximally_entangled requires dimension >= 2");
    CVec v = CVec::Zero(d * d);
    const double amp = 1.0 / std::sqrt(static_cast<double>(d));
    for (int j = 0; j < d; ++j) v(j * d + j) = amp;
    return ForwardState(Ket(std::move(v), {d, d}));
}

ForwardState singlet() {
    const double r = 1.0 / std::sqrt(2.0);
    CVec v(4);
    v << 0.0, r, -r, 0.0;
    return ForwardState(Ket(std::move(v), {2, 2}));
}

std::vector<ForwardState> bell_basis() {
    const double r = 1.0 / std::sqrt(2.0);
    auto make = [&](cx a0, cx a1, cx a2, cx a3) {
        CVec v(4);
        v << a0, a1, a2, a3;
        return ForwardState(Ket(std::move(v), {2, 2}));
    };
    return {make(r, 0, 0, r), make(r, 0, 0, -r), make(0, r, r, 0),
            make(0, r, -r, 0)};
}

}  // namespace tsv
