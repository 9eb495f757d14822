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

#include "tsv/timeline.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "tsv/rng.hpp"

namespace tsv {

std::vector<int> Timeline::dims() const {
    std::vector<int> out;
    out.reserve(systems.size());
    for (const SystemDecl& s : systems) out.push_back(s.dim);
    return out;
}

int Timeline::total_dim() const {
    int p = 1;
    for (const SystemDecl& s : systems) p *= s.dim;
    return p;
}

int Timeline::system_index(std::string_view name) const {
    for (std::size_t i = 0; i < systems.size(); ++i) {
        if (systems[i].name == name) return static_cast<int>(i);
    }
    throw UnknownLabel("unknown system '" + std::string(name) + "'");
}

Timeline& Timeline::preselect(ForwardState state) {
    events.push_back(PreselectEvent{std::move(state)});
    return *this;
}
Timeline& Timeline::unitary(LinearOp op, std::vector<int> targets) {
    events.push_back(UnitaryEvent{std::move(op), std::move(targets)});
    return *this;
}
Timeline& Timeline::measure(Observable obs, std::vector<int> targets,
                            std::string label) {
    events.push_back(
        MeasureEvent{std::move(obs), std::move(targets), std::move(label)});
    return *this;
}
Timeline& Timeline::postselect(std::string label, int outcome) {
    events.push_back(PostselectEvent{std::move(label), outcome});
    return *this;
}
Timeline& Timeline::guard(std::vector<int> targets) {
    events.push_back(GuardEvent{std::move(targets)});
    return *this;
}

namespace {

using Code = ValidationIssue::Code;

void check_targets(const Timeline& t, const std::vector<int>& targets,
                   const std::vector<int>& op_dims, int event_index,
                   std::vector<ValidationIssue>& issues) {
    std::set<int> seen;
    std::vector<int> target_dims;
    bool ok = true;
    for (int tgt : targets) {
        if (tgt < 0 || tgt >= static_cast<int>(t.systems.size())) {
            issues.push_back({Code::UnknownTarget, event_index,
                              "event " + std::to_string(event_index) +
                                  ": target " + std::to_string(tgt) +
                                  " is not a declared system"});
            ok = false;
            continue;
        }
        if (!seen.insert(tgt).second) {
            issues.push_back({Code::DuplicateTarget, event_index,
                              "event " + std::to_string(event_index) +
                                  ": duplicate target " + std::to_string(tgt)});
            ok = false;
        }
        target_dims.push_back(t.systems[tgt].dim);
    }
    if (ok && target_dims != op_dims) {
        issues.push_back({Code::DimMismatch, event_index,
                          "event " + std::to_string(event_index) +
                              ": operator dims do not match target dims"});
    }
}

}  // namespace

std::vector<ValidationIssue> validate(const Timeline& t) {
    std::vector<ValidationIssue> issues;

    if (t.systems.empty()) {
        issues.push_back({Code::NoSystems, -1, "timeline declares no systems"});
    }
    std::set<std::string> names;
    for (const SystemDecl& s : t.systems) {
        if (s.dim < 2) {
            issues.push_back({Code::BadDimension, -1,
                              "system '" + s.name + "' has dimension " +
                                  std::to_string(s.dim) + " (must be >= 2)"});
        }
        if (s.name.empty() || !names.insert(s.name).second) {
            issues.push_back({Code::DuplicateSystemName, -1,
                              "system name '" + s.name +
                                  "' is empty or duplicated"});
        }
    }

    // label -> (event index, outcome count); insertion order preserved for
    // "postselect must reference an earlier measurement".
    std::map<std::string, std::pair<int, std::size_t>> measures;
    std::set<int> guarded;
    bool preselect_seen = false;
    const int last = static_cast<int>(t.events.size()) - 1;

    for (int i = 0; i <= last; ++i) {
        const Event& ev = t.events[i];

        // Guard check: any event after a Guard touching a guarded system is a
        // violation unless it is the final event of the timeline.
        auto check_guard = [&](const std::vector<int>& targets) {
            if (i == last) return;
            for (int tgt : targets) {
                if (guarded.count(tgt)) {
                    issues.push_back(
                        {Code::GuardViolation, i,
                         "event " + std::to_string(i) + ": system '" +
                             t.systems[tgt].name +
                             "' is guarded and may not be touched before the "
                             "final event"});
                }
            }
        };

        if (const auto* pre = std::get_if<PreselectEvent>(&ev)) {
            if (preselect_seen) {
                issues.push_back({Code::MultiplePreselect, i,
                                  "event " + std::to_string(i) +
                                      ": more than one preselect"});
            }
            preselect_seen = true;
            if (i != 0) {
                issues.push_back({Code::PreselectNotFirst, i,
                                  "preselect must be the first event"});
            }
            if (pre->state.dims() != t.dims()) {
                issues.push_back({Code::DimMismatch, i,
                                  "preselect state dims do not match the "
                                  "declared systems"});
            }
        } else if (const auto* u = std::get_if<UnitaryEvent>(&ev)) {
            check_targets(t, u->targets, u->op.dims, i, issues);
            check_guard(u->targets);
            if (!u->op.is_unitary()) {
                issues.push_back({Code::NotUnitary, i,
                                  "event " + std::to_string(i) +
                                      ": operator is not unitary"});
            }
        } else if (const auto* m = std::get_if<MeasureEvent>(&ev)) {
            check_targets(t, m->targets, m->obs.dims(), i, issues);
            check_guard(m->targets);
            if (m->label.empty()) {
                issues.push_back({Code::EmptyLabel, i,
                                  "event " + std::to_string(i) +
                                      ": measurement label is empty"});
            } else if (!measures
                            .emplace(m->label,
                                     std::make_pair(i, m->obs.outcome_count()))
                            .second) {
                issues.push_back({Code::DuplicateLabel, i,
                                  "event " + std::to_string(i) +
                                      ": duplicate measurement label '" +
                                      m->label + "'"});
            }
        } else if (const auto* p = std::get_if<PostselectEvent>(&ev)) {
            auto it = measures.find(p->label);
            if (it == measures.end()) {
                issues.push_back({Code::UnknownLabel, i,
                                  "event " + std::to_string(i) +
                                      ": postselect references unknown label '" +
                                      p->label + "'"});
            } else if (p->outcome < 0 ||
                       p->outcome >= static_cast<int>(it->second.second)) {
                issues.push_back({Code::OutcomeOutOfRange, i,
                                  "event " + std::to_string(i) +
                                      ": outcome index " +
                                      std::to_string(p->outcome) +
                                      " out of range for label '" + p->label +
                                      "'"});
            }
        } else if (const auto* g = std::get_if<GuardEvent>(&ev)) {
            for (int tgt : g->targets) {
                if (tgt < 0 || tgt >= static_cast<int>(t.systems.size())) {
                    issues.push_back({Code::UnknownTarget, i,
                                      "event " + std::to_string(i) +
                                          ": guard target " +
                                          std::to_string(tgt) +
                                          " is not a declared system"});
                } else {
                    guarded.insert(tgt);
                }
            }
        }
    }

    if (!preselect_seen) {
        issues.push_back(
            {Code::MissingPreselect, -1, "timeline has no preselect event"});
    }
    return issues;
}

ValidationFailed::ValidationFailed(std::vector<ValidationIssue> probs)
    : Error([&probs] {
          std::ostringstream os;
          os << "timeline validation failed:";
          for (const ValidationIssue& p : probs) os << "\n  " << p.message;
          return os.str();
      }()),
      issues(std::move(probs)) {}

const OutcomeDistribution& RunResult::conditional(std::string_view label) const {
    for (const MeasurementRecord& rec : measurements) {
        if (rec.label == label) return rec.conditional;
    }
    throw UnknownLabel("no measurement with label '" + std::string(label) + "'");
}

namespace {

struct PreparedMeasure {
    const MeasureEvent* event;
    std::vector<CMat> projectors;  // embedded in the full space
};

struct Prepared {
    const Timeline* timeline;
    CVec initial;
    std::vector<const Event*> order;          // events after the preselect
    std::vector<PreparedMeasure> measures;    // timeline order
    std::vector<CMat> unitaries;              // embedded, in unitary order
    std::map<std::string, std::size_t> measure_index_of_label;
};

Prepared prepare(const Timeline& t) {
    std::vector<ValidationIssue> issues = validate(t);
    if (!issues.empty()) throw ValidationFailed(std::move(issues));

    Prepared prep;
    prep.timeline = &t;
    const std::vector<int> full_dims = t.dims();

    for (const Event& ev : t.events) {
        if (const auto* pre = std::get_if<PreselectEvent>(&ev)) {
            prep.initial = pre->state.ket.amplitudes;
            continue;
        }
        prep.order.push_back(&ev);
        if (const auto* m = std::get_if<MeasureEvent>(&ev)) {
            PreparedMeasure pm;
            pm.event = m;
            for (std::size_t k = 0; k < m->obs.outcome_count(); ++k) {
                pm.projectors.push_back(
                    embed(m->obs.projector(k), m->targets, full_dims).matrix);
            }
            prep.measure_index_of_label[m->label] = prep.measures.size();
            prep.measures.push_back(std::move(pm));
        } else if (const auto* u = std::get_if<UnitaryEvent>(&ev)) {
            prep.unitaries.push_back(embed(u->op, u->targets, full_dims).matrix);
        }
    }
    return prep;
}

std::vector<OutcomeLabel> labels_of(const Observable& obs) {
    std::vector<OutcomeLabel> out;
    for (std::size_t i = 0; i < obs.outcome_count(); ++i) {
        out.push_back({obs.eigenvalue(i), static_cast<int>(i)});
    }
    return out;
}

}  // namespace

RunResult enumerate(const Timeline& t, const EnumerateOptions& opts) {
    Prepared prep = prepare(t);

    struct Branch {
        CVec ket;                  // unnormalized; squared norm = probability
        std::vector<int> outcomes; // per measurement, timeline order
    };
    std::vector<Branch> branches;
    branches.push_back({prep.initial, {}});

    std::size_t unitary_idx = 0;
    std::size_t measure_idx = 0;
    for (const Event* ev : prep.order) {
        if (std::holds_alternative<UnitaryEvent>(*ev)) {
            const CMat& u = prep.unitaries[unitary_idx++];
            for (Branch& b : branches) b.ket = u * b.ket;
        } else if (std::holds_alternative<MeasureEvent>(*ev)) {
            const PreparedMeasure& pm = prep.measures[measure_idx++];
            const std::size_t k = pm.projectors.size();
            if (branches.size() * k > opts.branch_cap) {
                throw BranchCapExceeded(
                    "branch count would exceed the cap of " +
                    std::to_string(opts.branch_cap));
            }
            std::vector<Branch> next;
            next.reserve(branches.size() * k);
            for (const Branch& b : branches) {
                for (std::size_t o = 0; o < k; ++o) {
                    Branch child{pm.projectors[o] * b.ket, b.outcomes};
                    child.outcomes.push_back(static_cast<int>(o));
                    // Keep everything except hard zeros; a tiny surviving
                    // branch still renormalizes to exact conditionals.
                    if (child.ket.squaredNorm() > 0.0) {
                        next.push_back(std::move(child));
                    }
                }
            }
            branches = std::move(next);
        } else if (const auto* p = std::get_if<PostselectEvent>(&*ev)) {
            const std::size_t mi = prep.measure_index_of_label.at(p->label);
            std::vector<Branch> next;
            for (Branch& b : branches) {
                if (b.outcomes[mi] == p->outcome) next.push_back(std::move(b));
            }
            branches = std::move(next);
        }
        // Guard events carry no runtime action; validate enforced them.
    }

    double total = 0.0;
    for (const Branch& b : branches) total += b.ket.squaredNorm();
    if (total <= kSelectionTol) {
        throw EmptyEnsemble("no branch survives post-selection");
    }

    RunResult result;
    result.post_selection_probability = total;
    result.branch_count = branches.size();
    for (std::size_t mi = 0; mi < prep.measures.size(); ++mi) {
        const Observable& obs = prep.measures[mi].event->obs;
        std::vector<double> probs(obs.outcome_count(), 0.0);
        for (const Branch& b : branches) {
            probs[static_cast<std::size_t>(b.outcomes[mi])] +=
                b.ket.squaredNorm();
        }
        for (double& v : probs) v /= total;
        result.measurements.push_back(
            {prep.measures[mi].event->label,
             OutcomeDistribution(labels_of(obs), std::move(probs))});
    }
    return result;
}

RunResult sample(const Timeline& t, const SampleOptions& opts) {
    if (opts.shots < 1) throw Error("sample requires shots >= 1");
    Prepared prep = prepare(t);

    const std::size_t n_measures = prep.measures.size();
    std::vector<std::vector<std::uint64_t>> counts(n_measures);
    for (std::size_t mi = 0; mi < n_measures; ++mi) {
        counts[mi].assign(prep.measures[mi].projectors.size(), 0);
    }

    SampleStats stats;
    stats.shots = opts.shots;
    stats.seed = opts.seed;

    std::vector<int> outcomes(n_measures);
    for (std::uint64_t shot = 0; shot < opts.shots; ++shot) {
        SplitMix64 rng = SplitMix64::derive(opts.seed, shot);
        CVec state = prep.initial;
        bool rejected = false;

        std::size_t unitary_idx = 0;
        std::size_t measure_idx = 0;
        for (const Event* ev : prep.order) {
            if (std::holds_alternative<UnitaryEvent>(*ev)) {
                state = prep.unitaries[unitary_idx++] * state;
            } else if (std::holds_alternative<MeasureEvent>(*ev)) {
                const PreparedMeasure& pm = prep.measures[measure_idx];
                const std::size_t k = pm.projectors.size();
                std::vector<double> w(k);
                double sum = 0.0;
                for (std::size_t o = 0; o < k; ++o) {
                    w[o] = (pm.projectors[o] * state).squaredNorm();
                    sum += w[o];
                }
                const double u = rng.next_double() * sum;
                // Fallback for rounding at the top of the CDF: the last
                // outcome with nonzero weight.
                std::size_t picked = 0;
                for (std::size_t o = 0; o < k; ++o) {
                    if (w[o] > 0.0) picked = o;
                }
                double acc = 0.0;
                for (std::size_t o = 0; o < k; ++o) {
                    acc += w[o];
                    if (w[o] > 0.0 && u < acc) {
                        picked = o;
                        break;
                    }
                }
                state = pm.projectors[picked] * state;
                state /= std::sqrt(w[picked]);
                outcomes[measure_idx] = static_cast<int>(picked);
                ++measure_idx;
            } else if (const auto* p = std::get_if<PostselectEvent>(&*ev)) {
                const std::size_t mi = prep.measure_index_of_label.at(p->label);
                if (outcomes[mi] != p->outcome) {
                    rejected = true;
                    break;
                }
            }
        }

        if (rejected) continue;
        ++stats.accepted;
        for (std::size_t mi = 0; mi < n_measures; ++mi) {
            ++counts[mi][static_cast<std::size_t>(outcomes[mi])];
        }
        if (opts.record_sequences) stats.sequences.push_back(outcomes);
    }

    RunResult result;
    result.post_selection_probability =
        static_cast<double>(stats.accepted) / static_cast<double>(opts.shots);
    result.branch_count = 0;

    if (stats.accepted == 0) {
        // Distinguish bad luck from an impossible selection.
        double exact = enumerate(t).post_selection_probability;
        if (exact <= kSelectionTol) {
            throw EmptyEnsemble(
                "no accepted shots and the exact post-selection probability "
                "is zero");
        }
    } else {
        for (std::size_t mi = 0; mi < n_measures; ++mi) {
            const Observable& obs = prep.measures[mi].event->obs;
            std::vector<double> probs(counts[mi].size());
            for (std::size_t o = 0; o < probs.size(); ++o) {
                probs[o] = static_cast<double>(counts[mi][o]) /
                           static_cast<double>(stats.accepted);
            }
            result.measurements.push_back(
                {prep.measures[mi].event->label,
                 OutcomeDistribution(labels_of(obs), std::move(probs))});
        }
    }
    result.sample_stats = std::move(stats);
    return result;
}

RunResult sample(const Timeline& t, std::uint64_t shots, std::uint64_t seed) {
    return sample(t, SampleOptions{shots, seed, false});
}

}  // namespace tsv
