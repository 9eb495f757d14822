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

#ifndef TSV_PROTOCOLS_HPP
#define TSV_PROTOCOLS_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tsv/rng.hpp"
#include "tsv/states.hpp"
#include "tsv/timeline.hpp"

namespace tsv {

/// Completely positive map as a Kraus set. Physical channels are trace
/// preserving (Σ K†K = I); post-selected linear maps drop that constraint and
/// are renormalized by whoever applies them.
///
/// A channel may additionally be controlled by a later basis choice — a
/// device no physical process can implement, kept here as the foil for the
/// signaling audit. Such a channel's Kraus set is instantiated per basis;
/// the stored `kraus` list is its computational-basis instantiation.
struct Channel {
    enum class BasisRule {
        fixed,            // kraus list used as-is
        clone_projector,  // K_k = |e_k e_k⟩⟨e_k e_k| for later basis {e_k}
        // Measure particle 1 in the later basis and re-prepare particle 2 to
        // match: trace preserving, so future control alone cannot signal.
        reprepare_projector,
    };

    std::vector<LinearOp> kraus;
    bool physical = true;
    BasisRule rule = BasisRule::fixed;

    /// Validates the completeness relation (physical) or that at least one
    /// operator is nonzero (post-selected map).
    static Channel from_kraus(std::vector<LinearOp> kraus, bool physical);
    static Channel identity(std::vector<int> dims);

    bool completeness_holds(double tol = kHermTol) const;
    /// Kraus set for a given later-choice orthonormal basis.
    std::vector<LinearOp> kraus_for(const std::vector<Ket>& later_basis) const;
    /// Σ K ρ K† (unnormalized for post-selected maps).
    LinearOp apply(const LinearOp& rho) const;
};

/// Hypothetical device copying the later measurement's basis outcome onto
/// both particles of a pair; trace decreasing, flagged non-physical.
Channel ideal_backward_cloner();

/// Physical random channel: Gaussian Kraus operators normalized into a CPTP
/// set. `dims` is the full space the channel acts on.
Channel random_cptp_channel(std::vector<int> dims, int n_kraus,
                            SplitMix64& rng);

/// Maximally entangled pre-selection plus a guard token naming the ancilla
/// factor. A timeline honoring the token adds Guard({ancilla}) right after
/// the preselect; validate then rejects any event touching the ancilla before
/// the final event.
struct ErasedPast {
    ForwardState state;             // on system ⊗ ancilla, dims [d, d]
    int guarded_subsystem;          // ancilla factor index within the pair
};

ErasedPast erase_past(int system_dim);

/// Qubit time-direction flip: backward α⟨↑|+β⟨↓| becomes the forward state
/// −β*|↑⟩+α*|↓⟩ (with the BackwardState storage convention, input components
/// (c0, c1) map to (−conj(c1), conj(c0))).
ForwardState flip_backward_to_forward(const BackwardState& chi);

/// Names of the Pauli corrections per Bell outcome, order Φ+, Φ−, Ψ+, Ψ−.
std::array<std::string, 4> bell_correction_names();
/// The correction unitaries themselves, same order.
std::array<LinearOp, 4> bell_correction_ops();

struct TeleportReport {
    int postselected_outcome = 0;        // Victor's outcome index of A
    double post_probability = 0.0;       // exact probability of his selection
    std::array<std::string, 4> corrections;  // per Bell outcome
    OutcomeDistribution victoria_conditional;             // exact, overall
    std::vector<OutcomeDistribution> per_bell_conditional; // one per Bell outcome
    OutcomeDistribution backward_born;  // |⟨B=b|A=a⟩|², the law to respect
    std::optional<RunResult> sampled;   // rejection-sampled variant
};

/// Full chain, exactly: Victoria measures B on a past-erased qubit, Alice
/// Bell-measures it with her half of a Φ+ pair, Bob applies the fixed Pauli
/// correction per Bell outcome, Victor measures A and selects outcome
/// `a_index`. Victoria's conditional outcome distribution — overall and
/// within each Bell branch — must follow |⟨B=b|A=a⟩|².
TeleportReport teleport_backward_experiment(
    const Observable& A, int a_index, const Observable& B,
    std::optional<SampleOptions> sampling = std::nullopt);

/// The canonical timeline the experiment runs (exposed for the oracle and
/// for scenario round-trips): systems [victoria, anc, alice, bob].
Timeline teleport_backward_timeline(const Observable& A, int a_index,
                                    const Observable& B);

/// Earlier-time joint statistics of pair measurements under the two later
/// choices. `joint(sub, later)` indexes outcome pairs as m1*2 + m2.
struct SignalingReport {
    enum class Basis { z = 0, x = 1 };

    // [sub-ensemble basis][later choice] -> joint distribution over 4 outcomes
    std::array<std::array<std::array<double, 4>, 2>, 2> joint{};
    double trace_distance = 0.0;
    bool candidate_physical = true;

    const std::array<double, 4>& stats(Basis sub, Basis later) const {
        return joint[static_cast<int>(sub)][static_cast<int>(later)];
    }
};

/// The causality audit: pairs prepared maximally mixed; at the earlier time
/// one sub-ensemble measures σ_z⊗σ_z, the other σ_x⊗σ_x; the candidate
/// channel acts; later, σ_z or σ_x is measured on particle 1 (no outcome
/// selection). Reports both sub-ensembles' earlier joint statistics under
/// both later choices and the maximal total-variation distance between the
/// later choices. Physical channels must give distance 0; the ideal backward
/// cloner gives exactly 1/2.
SignalingReport cloning_signaling_audit(const Channel& candidate);

}  // namespace tsv

#endif  // TSV_PROTOCOLS_HPP
