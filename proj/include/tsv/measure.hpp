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

#ifndef TSV_MEASURE_HPP
#define TSV_MEASURE_HPP

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "tsv/states.hpp"

namespace tsv {

struct Timeline;

// A pre/post pair whose intermediate branch weights all fall at or below this
// threshold is declared inconsistent instead of producing NaNs.
inline constexpr double kSelectionTol = 1e-14;

struct OutcomeLabel {
    double eigenvalue;
    int index;
};

/// Probability table over the grouped outcomes of one observable, outcomes in
/// ascending-eigenvalue order.
struct OutcomeDistribution {
    std::vector<OutcomeLabel> labels;
    std::vector<double> probabilities;

    OutcomeDistribution() = default;
    OutcomeDistribution(std::vector<OutcomeLabel> l, std::vector<double> p);

    std::size_t size() const { return probabilities.size(); }
    double probability_of_index(int outcome_index) const;
    double probability_of_eigenvalue(double value, double tol = 1e-9) const;
    double max_abs_diff(const OutcomeDistribution& other) const;
};

/// p_n = ‖P_n |ψ⟩‖².
OutcomeDistribution born(const ForwardState& state, const Observable& obs);

/// p_n = |⟨φ|P_n|ψ⟩|² / Σ_j |⟨φ|P_j|ψ⟩|².
/// Throws InconsistentSelection when every branch weight vanishes.
OutcomeDistribution abl(const ForwardState& pre, const BackwardState& post,
                        const Observable& obs);
OutcomeDistribution abl(const TwoStateVector& tsv_pair, const Observable& obs);

/// Partial post-selection rule: the system is pre-selected entangled with an
/// untouched ancilla (ent_pre on dims [d, d_anc]) and post-selected by a
/// complete outcome A=a on the system alone.
///
///   p_n = ‖P_{A=a} P_{B=b_n} |Ψ⟩‖² / Σ_i ‖P_{A=a} P_{B=b_i} |Ψ⟩‖²
///
/// with both projectors acting on the system factor. For maximally entangled
/// pre-selection this reduces to the Born distribution of the backward state
/// alone; that equality is verified by the tests, not assumed here.
OutcomeDistribution abl_generalized(const ForwardState& ent_pre,
                                    const BackwardState& post,
                                    const Observable& obs);

/// Brute-force check: enumerate every branch of `timeline` exactly and return
/// the conditional distribution of each measurement given all selections,
/// keyed by measurement label. Agrees with abl/abl_generalized on their
/// domains; this path shares no probability-rule code with them.
std::map<std::string, OutcomeDistribution> sequential_oracle(
    const Timeline& timeline);

}  // namespace tsv

#endif  // TSV_MEASURE_HPP
