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

#ifndef TSV_STATES_HPP
#define TSV_STATES_HPP

#include <vector>

#include "tsv/linalg.hpp"

namespace tsv {

/// Ordinary quantum state: created by a past measurement, constrains future
/// statistics.
struct ForwardState {
    Ket ket;

    explicit ForwardState(Ket k);

    const std::vector<int>& dims() const { return ket.dims; }
    int dim() const { return ket.dim(); }
};

/// State defined by a future measurement outcome, constraining earlier
/// statistics by retrodiction.
///
/// Storage convention: `ket` holds the components of the selected outcome's
/// eigenket (the conjugate transpose of the bra functional). The functional is
/// applied through tsv::inner, which conjugates its left argument — that is
/// the only conjugation site; nothing here is pre-conjugated.
struct BackwardState {
    Ket ket;

    explicit BackwardState(Ket k);

    const std::vector<int>& dims() const { return ket.dims; }
    int dim() const { return ket.dim(); }
};

/// ⟨backward| applied to |forward⟩.
cx bra_ket(const BackwardState& b, const ForwardState& f);

/// A system between a pre-selection and a post-selection. Orthogonal pairs
/// are rejected: they describe an empty ensemble.
struct TwoStateVector {
    BackwardState backward;
    ForwardState forward;

    TwoStateVector(BackwardState b, ForwardState f);

    cx overlap() const { return bra_ket(backward, forward); }
    const std::vector<int>& dims() const { return forward.dims(); }
};

/// Density operator: Hermitian, positive semidefinite, unit trace.
struct DensityOp {
    LinearOp op;

    explicit DensityOp(LinearOp o);

    static DensityOp from_ket(const Ket& k);
    static DensityOp maximally_mixed(std::vector<int> dims);

    const std::vector<int>& dims() const { return op.dims; }
    int dim() const { return op.dim(); }
};

/// (1/√d) Σ_j |j⟩|j⟩ over system ⊗ ancilla, dims [d, d].
ForwardState maximally_entangled(int d);

/// (|01⟩ − |10⟩)/√2 on two qubits.
ForwardState singlet();

/// The four Bell states in fixed order Φ+, Φ−, Ψ+, Ψ−.
///
/// Phase convention (frozen; every teleportation correction below derives
/// from it):
///   Φ+ = (|00⟩ + |11⟩)/√2    corrected by I
///   Φ− = (|00⟩ − |11⟩)/√2    corrected by Z
///   Ψ+ = (|01⟩ + |10⟩)/√2    corrected by X
///   Ψ− = (|01⟩ − |10⟩)/√2    corrected by XZ
std::vector<ForwardState> bell_basis();

}  // namespace tsv

#endif  // TSV_STATES_HPP
