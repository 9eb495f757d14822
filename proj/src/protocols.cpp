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

#include "tsv/protocols.hpp"

#include <cmath>
#include <utility>

namespace tsv {

Channel Channel::from_kraus(std::vector<LinearOp> kraus, bool physical) {
    if (kraus.empty()) throw Error("channel needs at least one Kraus operator");
    const std::vector<int>& dims = kraus.front().dims;
    bool any_nonzero = false;
    for (const LinearOp& k : kraus) {
        if (k.dims != dims) throw DimMismatch("mixed Kraus operator dims");
        if (k.matrix.cwiseAbs().maxCoeff() > 0.0) any_nonzero = true;
    }
    if (!any_nonzero) throw Error("channel has only zero Kraus operators");
    Channel ch{std::move(kraus), physical, BasisRule::fixed};
    if (physical && !ch.completeness_holds()) {
        throw Error("physical channel violates Σ K†K = I");
    }
    return ch;
}

Channel Channel::identity(std::vector<int> dims) {
    return from_kraus({LinearOp::identity(std::move(dims))}, true);
}

bool Channel::completeness_holds(double tol) const {
    const int d = kraus.front().dim();
    CMat sum = CMat::Zero(d, d);
    for (const LinearOp& k : kraus) sum += k.matrix.adjoint() * k.matrix;
    return (sum - CMat::Identity(d, d)).cwiseAbs().maxCoeff() <= tol;
}

std::vector<LinearOp> Channel::kraus_for(
    const std::vector<Ket>& later_basis) const {
    if (rule == BasisRule::fixed) return kraus;
    std::vector<LinearOp> out;
    if (rule == BasisRule::clone_projector) {
        // Keep only the component where both particles already agree in the
        // later basis.
        for (const Ket& e : later_basis) {
            out.push_back(LinearOp::outer(tensor(e, e)));
        }
        return out;
    }
    // reprepare_projector: K_{k,m} = (|e_k⟩⟨e_k|) ⊗ (|e_k⟩⟨e_m|).
    for (const Ket& e : later_basis) {
        const CMat p1 = e.amplitudes * e.amplitudes.adjoint();
        for (const Ket& m : later_basis) {
            const CMat p2 = e.amplitudes * m.amplitudes.adjoint();
            out.emplace_back(
                tensor(LinearOp(p1, e.dims), LinearOp(p2, e.dims)).matrix,
                std::vector<int>{e.dim(), e.dim()});
        }
    }
    return out;
}

LinearOp Channel::apply(const LinearOp& rho) const {
    if (rho.dims != kraus.front().dims) {
        throw DimMismatch("channel applied to a state of different dims");
    }
    CMat out = CMat::Zero(rho.dim(), rho.dim());
    for (const LinearOp& k : kraus) {
        out += k.matrix * rho.matrix * k.matrix.adjoint();
    }
    return LinearOp(std::move(out), rho.dims);
}

Channel ideal_backward_cloner() {
    // Stored instantiation: computational (z) basis.
    std::vector<LinearOp> kraus;
    for (int k = 0; k < 2; ++k) {
        kraus.push_back(LinearOp::outer(
            tensor(Ket::basis(2, k), Ket::basis(2, k))));
    }
    Channel ch{std::move(kraus), false, Channel::BasisRule::clone_projector};
    return ch;
}

Channel random_cptp_channel(std::vector<int> dims, int n_kraus,
                            SplitMix64& rng) {
    if (n_kraus < 1) throw Error("need at least one Kraus operator");
    LinearOp id = LinearOp::identity(dims);
    const int d = id.dim();

    std::vector<CMat> raw;
    CMat gram = CMat::Zero(d, d);
    for (int j = 0; j < n_kraus; ++j) {
        CMat g(d, d);
        for (int r = 0; r < d; ++r) {
            for (int c = 0; c < d; ++c) {
                g(r, c) = cx(rng.next_gaussian(), rng.next_gaussian());
            }
        }
        gram += g.adjoint() * g;
        raw.push_back(std::move(g));
    }

    // K_j = G_j · S^{-1/2} makes Σ K†K = I.
    Eigen::SelfAdjointEigenSolver<CMat> solver(gram);
    CMat inv_sqrt = solver.eigenvectors() *
                    solver.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                    solver.eigenvectors().adjoint();

    std::vector<LinearOp> kraus;
    kraus.reserve(raw.size());
    for (CMat& g : raw) kraus.emplace_back((g * inv_sqrt).eval(), dims);
    return Channel::from_kraus(std::move(kraus), true);
}

ErasedPast erase_past(int system_dim) {
    return ErasedPast{maximally_entangled(system_dim), 1};
}

ForwardState flip_backward_to_forward(const BackwardState& chi) {
    if (chi.dims() != std::vector<int>{2}) {
        throw DimMismatch("flip is defined on a single qubit");
    }
    CVec out(2);
    out(0) = -std::conj(chi.ket.amplitudes(1));
    out(1) = std::conj(chi.ket.amplitudes(0));
    return ForwardState(Ket(std::move(out), {2}));
}

std::array<std::string, 4> bell_correction_names() {
    return {"I", "Z", "X", "XZ"};
}

std::array<LinearOp, 4> bell_correction_ops() {
    CMat id(2, 2), z(2, 2), x(2, 2), xz(2, 2);
    id << 1, 0, 0, 1;
    z << 1, 0, 0, -1;
    x << 0, 1, 1, 0;
    xz << 0, -1, 1, 0;
    return {LinearOp(id, {2}), LinearOp(z, {2}), LinearOp(x, {2}),
            LinearOp(xz, {2})};
}

namespace {

/// Observable whose outcomes 0..3 are the Bell states.
Observable bell_observable() {
    std::vector<LinearOp> projectors;
    for (const ForwardState& b : bell_basis()) {
        projectors.push_back(LinearOp::outer(b.ket));
    }
    return Observable::from_projectors({0.0, 1.0, 2.0, 3.0},
                                       std::move(projectors));
}

/// Block unitary Σ_k |Bell_k⟩⟨Bell_k| ⊗ C_k: on a post-measurement Bell
/// state it acts exactly as the classically fed-forward Pauli correction.
LinearOp bell_correction_block() {
    const std::vector<ForwardState> bells = bell_basis();
    const std::array<LinearOp, 4> corrections = bell_correction_ops();
    CMat u = CMat::Zero(8, 8);
    for (int k = 0; k < 4; ++k) {
        u += tensor(LinearOp::outer(bells[k].ket), corrections[k]).matrix;
    }
    return LinearOp(std::move(u), {2, 2, 2});
}

}  // namespace

Timeline teleport_backward_timeline(const Observable& A, int a_index,
                                    const Observable& B) {
    if (A.dims() != std::vector<int>{2} || B.dims() != std::vector<int>{2}) {
        throw DimMismatch("teleportation experiment uses qubit observables");
    }
    if (a_index < 0 || a_index >= static_cast<int>(A.outcome_count())) {
        throw UnknownLabel("selected outcome index out of range");
    }
    // Victor's selection must be a complete outcome (rank-1 eigenspace);
    // otherwise the backward state |A=a⟩ is not a single ket.
    if (std::abs(A.projector(static_cast<std::size_t>(a_index))
                     .matrix.trace()
                     .real() -
                 1.0) > kHermTol) {
        throw Error("the selected outcome must be nondegenerate");
    }

    ErasedPast erased = erase_past(2);  // Victoria's qubit + guarded ancilla

    Timeline t;
    t.systems = {{"victoria", 2}, {"anc", 2}, {"alice", 2}, {"bob", 2}};
    t.preselect(ForwardState(
         tensor(erased.state.ket, bell_basis()[0].ket)))
        .guard({1})
        .measure(B, {0}, "victoria")
        .measure(bell_observable(), {0, 2}, "bell")
        .unitary(bell_correction_block(), {0, 2, 3})
        .measure(A, {3}, "victor")
        .postselect("victor", a_index);
    return t;
}

TeleportReport teleport_backward_experiment(
    const Observable& A, int a_index, const Observable& B,
    std::optional<SampleOptions> sampling) {
    Timeline t = teleport_backward_timeline(A, a_index, B);

    TeleportReport report;
    report.postselected_outcome = a_index;
    report.corrections = bell_correction_names();

    RunResult overall;
    try {
        overall = enumerate(t);
    } catch (const EmptyEnsemble&) {
        throw InconsistentSelection(
            "the selected outcome has probability zero");
    }
    report.post_probability = overall.post_selection_probability;
    report.victoria_conditional = overall.conditional("victoria");

    for (int k = 0; k < 4; ++k) {
        Timeline branch = t;
        branch.postselect("bell", k);
        report.per_bell_conditional.push_back(
            enumerate(branch).conditional("victoria"));
    }

    // The law the outcomes must respect: Born distribution of the backward
    // state |A=a⟩ over B's outcomes.
    const CMat& pa = A.projector(static_cast<std::size_t>(a_index)).matrix;
    int best_col = 0;
    for (int c = 1; c < pa.cols(); ++c) {
        if (pa.col(c).norm() > pa.col(best_col).norm()) best_col = c;
    }
    report.backward_born =
        born(ForwardState(Ket(pa.col(best_col).normalized().eval(), {2})), B);

    if (sampling) {
        report.sampled = sample(t, *sampling);
    }
    return report;
}

namespace {

std::vector<Ket> basis_kets(SignalingReport::Basis b) {
    if (b == SignalingReport::Basis::z) {
        return {Ket::basis(2, 0), Ket::basis(2, 1)};
    }
    const double r = 1.0 / std::sqrt(2.0);
    CVec plus(2), minus(2);
    plus << r, r;
    minus << r, -r;
    return {Ket(plus, {2}), Ket(minus, {2})};
}

double total_variation(const std::array<double, 4>& p,
                       const std::array<double, 4>& q) {
    double d = 0.0;
    for (int i = 0; i < 4; ++i) d += std::abs(p[i] - q[i]);
    return 0.5 * d;
}

}  // namespace

SignalingReport cloning_signaling_audit(const Channel& candidate) {
    if (candidate.kraus.front().dims != std::vector<int>{2, 2}) {
        throw DimMismatch("the audit arrangement uses a pair of qubits");
    }

    SignalingReport report;
    report.candidate_physical =
        candidate.physical && candidate.completeness_holds();

    using Basis = SignalingReport::Basis;
    for (Basis sub : {Basis::z, Basis::x}) {
        const std::vector<Ket> sub_basis = basis_kets(sub);
        for (Basis later : {Basis::z, Basis::x}) {
            const std::vector<LinearOp> kraus =
                candidate.kraus_for(basis_kets(later));

            // Pairs arrive maximally mixed; measuring W⊗W at the earlier
            // time leaves |m1 m2⟩ with prior weight 1/4. The later
            // measurement's outcomes are summed over (no selection), so only
            // the channel's trace deficit reweights branches.
            std::array<double, 4>& joint =
                report.joint[static_cast<int>(sub)][static_cast<int>(later)];
            double total = 0.0;
            for (int m1 = 0; m1 < 2; ++m1) {
                for (int m2 = 0; m2 < 2; ++m2) {
                    const Ket branch =
                        tensor(sub_basis[static_cast<std::size_t>(m1)],
                               sub_basis[static_cast<std::size_t>(m2)]);
                    double w = 0.0;
                    for (const LinearOp& k : kraus) {
                        w += (k.matrix * branch.amplitudes).squaredNorm();
                    }
                    joint[static_cast<std::size_t>(m1 * 2 + m2)] = 0.25 * w;
                    total += 0.25 * w;
                }
            }
            if (total <= 0.0) {
                throw EmptyEnsemble(
                    "candidate channel annihilates the whole sub-ensemble");
            }
            for (double& v : joint) v /= total;
        }
    }

    const double dz = total_variation(report.stats(Basis::z, Basis::z),
                                      report.stats(Basis::z, Basis::x));
    const double dx = total_variation(report.stats(Basis::x, Basis::z),
                                      report.stats(Basis::x, Basis::x));
    report.trace_distance = std::max(dz, dx);
    return report;
}

}  // namespace tsv
