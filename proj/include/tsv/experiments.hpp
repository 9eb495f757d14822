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

#ifndef TSV_EXPERIMENTS_HPP
#define TSV_EXPERIMENTS_HPP

#include <string>
#include <vector>

#include "tsv/protocols.hpp"
#include "tsv/timeline.hpp"

namespace tsv {

struct ExperimentInfo {
    std::string name;
    std::string summary;
};

/// Stable catalog of the built-in experiments.
std::vector<ExperimentInfo> experiment_catalog();

/// One ball, three boxes: pre-selected in (|1⟩+|2⟩+|3⟩)/√3, post-selected on
/// (|1⟩+|2⟩−|3⟩)/√3. Opening box `probe_box` (0 or 1) finds the ball with
/// certainty — for either box.
Timeline three_box_timeline(int probe_box);

/// Past erasure on a qubit: maximally entangle with a guarded ancilla,
/// measure `mid` in between, post-select the system on |+⟩. The intermediate
/// statistics depend only on the backward state.
Timeline erase_past_timeline(const Observable& mid);

/// Operational verification of the time-direction flip: prepare a singlet,
/// post-select the system on the outcome ket `chi_outcome`; the ancilla's
/// conditional forward state is checked against `expected_forward` by a
/// projector measurement.
Timeline flip_verification_timeline(const Ket& chi_outcome,
                                    const Ket& expected_forward);

/// Every built-in experiment that is a plain timeline, for engine-level
/// self-consistency sweeps (teleport uses the σ_z/σ_z instance).
std::vector<std::pair<std::string, Timeline>> builtin_timelines();

}  // namespace tsv

#endif  // TSV_EXPERIMENTS_HPP
