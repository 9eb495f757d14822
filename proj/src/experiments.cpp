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

#include "tsv/experiments.hpp"

#include <cmath>

namespace tsv {

std::vector<ExperimentInfo> experiment_catalog() {
    return {
        {"three-box",
         "a pre/post-selected ball is found with certainty in box 1, and "
         "also with certainty in box 2"},
        {"erase",
         "entangle a qubit with a guarded ancilla; intermediate statistics "
         "then depend only on the final selection"},
        {"teleport-backward",
         "teleport a post-selected outcome backward through a Bell channel; "
         "Victoria's conditional statistics follow |<B=b|A=a>|^2"},
        {"flip",
         "turn a backward evolving qubit state into its flipped forward "
         "evolving partner via a singlet"},
        {"cloning-audit",
         "earlier-time statistics under two later measurement choices; any "
         "physical channel gives distance 0, a backward cloner would give "
         "1/2"},
    };
}

Timeline three_box_timeline(int probe_box) {
    if (probe_box < 0 || probe_box > 2) {
        throw BadSubsystem("probe box must be 0, 1 or 2");
    }
    const double r = 1.0 / std::sqrt(3.0);
    CVec pre(3), post(3);
    pre << r, r, r;
    post << r, r, -r;

    Timeline t;
    t.systems = {{"ball", 3}};
    t.preselect(ForwardState(Ket(pre, {3})))
        .measure(Observable::projector_onto(Ket::basis(3, probe_box)), {0},
                 "probe")
        .measure(Observable::projector_onto(Ket(post, {3})), {0}, "final")
        .postselect("final", 1);
    return t;
}

Timeline erase_past_timeline(const Observable& mid) {
    ErasedPast erased = erase_past(2);
    const double r = 1.0 / std::sqrt(2.0);
    CVec plus(2);
    plus << r, r;

    Timeline t;
    t.systems = {{"sys", 2}, {"anc", 2}};
    t.preselect(erased.state)
        .guard({erased.guarded_subsystem})
        .measure(mid, {0}, "mid")
        .measure(Observable::projector_onto(Ket(plus, {2})), {0}, "final")
        .postselect("final", 1);
    return t;
}

Timeline flip_verification_timeline(const Ket& chi_outcome,
                                    const Ket& expected_forward) {
    Timeline t;
    t.systems = {{"sys", 2}, {"anc", 2}};
    t.preselect(singlet())
        .measure(Observable::projector_onto(chi_outcome), {0}, "post")
        .postselect("post", 1)
        .measure(Observable::projector_onto(expected_forward), {1}, "verify");
    return t;
}

std::vector<std::pair<std::string, Timeline>> builtin_timelines() {
    std::vector<std::pair<std::string, Timeline>> out;
    out.emplace_back("three-box-1", three_box_timeline(0));
    out.emplace_back("three-box-2", three_box_timeline(1));
    out.emplace_back("erase-mid-z", erase_past_timeline(Observable::sigma_z()));
    out.emplace_back("erase-mid-x", erase_past_timeline(Observable::sigma_x()));

    const BackwardState chi(Ket((CVec(2) << 0.6, cx(0.0, 0.8)).finished(), {2}));
    out.emplace_back("flip-verify",
                     flip_verification_timeline(
                         chi.ket, flip_backward_to_forward(chi).ket));

    out.emplace_back("teleport-zz",
                     teleport_backward_timeline(Observable::sigma_z(), 1,
                                                Observable::sigma_z()));
    out.emplace_back("teleport-zx",
                     teleport_backward_timeline(Observable::sigma_z(), 1,
                                                Observable::sigma_x()));
    return out;
}

}  // namespace tsv
