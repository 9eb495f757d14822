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

#ifndef TSV_TIMELINE_HPP
#define TSV_TIMELINE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tsv/measure.hpp"
#include "tsv/states.hpp"

namespace tsv {

struct PreselectEvent {
    ForwardState state;
};

struct UnitaryEvent {
    LinearOp op;
    std::vector<int> targets;
};

struct MeasureEvent {
    Observable obs;
    std::vector<int> targets;
    std::string label;
};

struct PostselectEvent {
    std::string label;
    int outcome;
};

/// From this event on, the listed systems may not be touched by any event
/// other than the timeline's final one.
struct GuardEvent {
    std::vector<int> targets;
};

using Event = std::variant<PreselectEvent, UnitaryEvent, MeasureEvent,
                           PostselectEvent, GuardEvent>;

struct SystemDecl {
    std::string name;
    int dim;
};

/// Ordered event list over named systems. Build with the fluent helpers;
/// `validate` reports structural problems without throwing.
struct Timeline {
    std::vector<SystemDecl> systems;
    std::vector<Event> events;

    std::vector<int> dims() const;
    int total_dim() const;
    /// Index of a declared system; throws UnknownLabel for unknown names.
    int system_index(std::string_view name) const;

    Timeline& preselect(ForwardState state);
    Timeline& unitary(LinearOp op, std::vector<int> targets);
    Timeline& measure(Observable obs, std::vector<int> targets,
                      std::string label);
    Timeline& postselect(std::string label, int outcome);
    Timeline& guard(std::vector<int> targets);
};

struct ValidationIssue {
    enum class Code {
        NoSystems,
        BadDimension,
        DuplicateSystemName,
        MissingPreselect,
        PreselectNotFirst,
        MultiplePreselect,
        DimMismatch,
        UnknownTarget,
        DuplicateTarget,
        NotUnitary,
        DuplicateLabel,
        EmptyLabel,
        UnknownLabel,
        OutcomeOutOfRange,
        GuardViolation,
    };

    Code code;
    int event_index;  // -1 when the issue is not tied to one event
    std::string message;
};

/// Structural checks; returns every problem found, never throws.
std::vector<ValidationIssue> validate(const Timeline& t);

/// Thrown by enumerate/sample when validate() is not clean.
struct ValidationFailed : Error {
    explicit ValidationFailed(std::vector<ValidationIssue> probs);
    std::vector<ValidationIssue> issues;
};

struct MeasurementRecord {
    std::string label;
    OutcomeDistribution conditional;
};

struct SampleStats {
    std::uint64_t shots = 0;
    std::uint64_t accepted = 0;
    std::uint64_t seed = 0;
    /// Outcome index per measurement (timeline order) for each accepted shot;
    /// only filled when requested.
    std::vector<std::vector<int>> sequences;
};

struct RunResult {
    std::vector<MeasurementRecord> measurements;  // timeline order
    double post_selection_probability = 1.0;
    std::size_t branch_count = 0;
    std::optional<SampleStats> sample_stats;

    const OutcomeDistribution& conditional(std::string_view label) const;
};

struct EnumerateOptions {
    // A measurement with k eigenspaces multiplies the branch count by k; the
    // cap catches runaway scenarios before allocation.
    std::size_t branch_cap = 1'000'000;
};

/// Exact branch enumeration: collapse without renormalizing, keep every
/// branch's amplitude vector, renormalize conditionals on the surviving set.
RunResult enumerate(const Timeline& t, const EnumerateOptions& opts = {});

struct SampleOptions {
    std::uint64_t shots = 0;
    std::uint64_t seed = 0;
    bool record_sequences = false;
};

/// Born-rule sampling with collapse; post-selection by rejection. Each shot
/// draws from its own stream derived from (seed, shot index), so results are
/// independent of how shots are partitioned across workers.
RunResult sample(const Timeline& t, const SampleOptions& opts);
RunResult sample(const Timeline& t, std::uint64_t shots, std::uint64_t seed);

}  // namespace tsv

#endif  // TSV_TIMELINE_HPP
