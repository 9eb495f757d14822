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

#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "support/test_support.hpp"
#include "tsv/experiments.hpp"
#include "tsv/random_states.hpp"
#include "tsv/timeline.hpp"

using namespace tsv;

namespace {

bool has_issue(const std::vector<ValidationIssue>& issues,
               ValidationIssue::Code code) {
    return std::any_of(issues.begin(), issues.end(),
                       [&](const ValidationIssue& i) { return i.code == code; });
}

/// Checks the law of total probability for a timeline with exactly one
/// postselect: summing each measurement's conditionals over the selected
/// label's outcomes, weighted by selection probability, reproduces the
/// unconditioned statistics.
void check_total_probability(const Timeline& t, double tol = 1e-12) {
    std::size_t ps_index = t.events.size();
    for (std::size_t i = 0; i < t.events.size(); ++i) {
        if (std::holds_alternative<PostselectEvent>(t.events[i])) {
            REQUIRE(ps_index == t.events.size());  // exactly one
            ps_index = i;
        }
    }
    REQUIRE(ps_index < t.events.size());
    const auto& ps = std::get<PostselectEvent>(t.events[ps_index]);

    std::size_t n_outcomes = 0;
    for (const Event& ev : t.events) {
        if (const auto* m = std::get_if<MeasureEvent>(&ev)) {
            if (m->label == ps.label) n_outcomes = m->obs.outcome_count();
        }
    }
    REQUIRE(n_outcomes > 0);

    Timeline unconditioned = t;
    unconditioned.events.erase(unconditioned.events.begin() +
                               static_cast<std::ptrdiff_t>(ps_index));
    RunResult base = enumerate(unconditioned);

    double weight_sum = 0.0;
    std::vector<std::vector<double>> mixed;
    for (const MeasurementRecord& rec : base.measurements) {
        mixed.emplace_back(rec.conditional.size(), 0.0);
    }
    for (std::size_t k = 0; k < n_outcomes; ++k) {
        Timeline variant = t;
        std::get<PostselectEvent>(variant.events[ps_index]).outcome =
            static_cast<int>(k);
        RunResult r = [&]() -> RunResult {
            try {
                return enumerate(variant);
            } catch (const EmptyEnsemble&) {
                return RunResult{};  // zero-probability selection contributes 0
            }
        }();
        if (r.measurements.empty()) continue;
        weight_sum += r.post_selection_probability;
        for (std::size_t mi = 0; mi < r.measurements.size(); ++mi) {
            for (std::size_t o = 0;
                 o < r.measurements[mi].conditional.size(); ++o) {
                mixed[mi][o] += r.post_selection_probability *
                                r.measurements[mi].conditional.probabilities[o];
            }
        }
    }
    CHECK(std::abs(weight_sum - 1.0) < tol);
    for (std::size_t mi = 0; mi < base.measurements.size(); ++mi) {
        for (std::size_t o = 0; o < base.measurements[mi].conditional.size();
             ++o) {
            CHECK(std::abs(mixed[mi][o] -
                           base.measurements[mi].conditional.probabilities[o]) <
                  tol);
        }
    }
}

}  // namespace

TEST_CASE("a well-formed timeline validates cleanly") {
    CHECK(validate(three_box_timeline(0)).empty());
    CHECK(validate(erase_past_timeline(Observable::sigma_x())).empty());
}

TEST_CASE("validate reports unknown postselect labels") {
    Timeline t;
    t.systems = {{"q", 2}};
    t.preselect(ForwardState(Ket::basis(2, 0)))
        .measure(Observable::sigma_z(), {0}, "m")
        .postselect("nope", 0);
    CHECK(has_issue(validate(t), ValidationIssue::Code::UnknownLabel));
}

TEST_CASE("validate reports measuring a guarded ancilla") {
    Timeline t;
    t.systems = {{"sys", 2}, {"anc", 2}};
    t.preselect(maximally_entangled(2))
        .guard({1})
        .measure(Observable::sigma_z(), {1}, "broken")
        .measure(Observable::sigma_x(), {0}, "final")
        .postselect("final", 1);
    CHECK(has_issue(validate(t), ValidationIssue::Code::GuardViolation));
    CHECK_THROWS_AS(enumerate(t), ValidationFailed);
}

TEST_CASE("a final-event measurement of the guarded system is allowed") {
    Timeline t;
    t.systems = {{"sys", 2}, {"anc", 2}};
    t.preselect(maximally_entangled(2))
        .guard({1})
        .measure(Observable::sigma_x(), {0}, "mid")
        .measure(Observable::sigma_z(), {1}, "closing");
    CHECK(validate(t).empty());
}

TEST_CASE("validate catches structural mistakes") {
    Timeline t;
    t.systems = {{"q", 2}, {"q", 1}};
    t.measure(Observable::sigma_z(), {0}, "m")
        .preselect(ForwardState(Ket::basis(2, 0)));

    auto issues = validate(t);
    CHECK(has_issue(issues, ValidationIssue::Code::BadDimension));
    CHECK(has_issue(issues, ValidationIssue::Code::DuplicateSystemName));
    CHECK(has_issue(issues, ValidationIssue::Code::PreselectNotFirst));
    CHECK(has_issue(issues, ValidationIssue::Code::DimMismatch));

    Timeline t2;
    t2.systems = {{"q", 2}};
    t2.preselect(ForwardState(Ket::basis(2, 0)))
        .measure(Observable::sigma_z(), {0}, "m")
        .measure(Observable::sigma_x(), {0}, "m")
        .postselect("m", 5);
    auto issues2 = validate(t2);
    CHECK(has_issue(issues2, ValidationIssue::Code::DuplicateLabel));
    CHECK(has_issue(issues2, ValidationIssue::Code::OutcomeOutOfRange));

    Timeline t3;
    t3.systems = {{"q", 2}};
    CHECK(has_issue(validate(t3), ValidationIssue::Code::MissingPreselect));

    Timeline t4;
    t4.systems = {{"q", 2}};
    CMat not_u(2, 2);
    not_u << 1, 1, 0, 1;
    t4.preselect(ForwardState(Ket::basis(2, 0)))
        .unitary(LinearOp(not_u, {2}), {0});
    CHECK(has_issue(validate(t4), ValidationIssue::Code::NotUnitary));
}

TEST_CASE("enumerate: eigenstate measurement is deterministic") {
    Timeline t;
    t.systems = {{"q", 2}};
    t.preselect(ForwardState(Ket::basis(2, 0)))
        .measure(Observable::sigma_z(), {0}, "m");
    RunResult r = enumerate(t);
    CHECK(r.conditional("m").probability_of_eigenvalue(+1.0) == 1.0);
    CHECK(r.post_selection_probability == 1.0);
    CHECK(r.branch_count == 1);  // the zero-weight branch is dropped
}

TEST_CASE("enumerate throws EmptyEnsemble for impossible selections") {
    Timeline t;
    t.systems = {{"q", 2}};
    t.preselect(ForwardState(Ket::basis(2, 0)))
        .measure(Observable::projector_onto(Ket::basis(2, 1)), {0}, "m")
        .postselect("m", 1);
    CHECK_THROWS_AS(enumerate(t), EmptyEnsemble);
}

TEST_CASE("branch cap") {
    Timeline t;
    t.systems = {{"q", 2}};
    t.preselect(ForwardState(Ket::basis(2, 0)));
    for (int i = 0; i < 11; ++i) {
        t.measure(Observable::sigma_x(), {0}, "x" + std::to_string(i));
        t.measure(Observable::sigma_z(), {0}, "z" + std::to_string(i));
    }
    EnumerateOptions opts;
    opts.branch_cap = 1000;
    CHECK_THROWS_AS(enumerate(t, opts), BranchCapExceeded);
}

TEST_CASE("inserting a unitary after preselect equals preselecting U·psi") {
    SplitMix64 rng(41);
    for (int trial = 0; trial < 20; ++trial) {
        Ket psi = random_ket({2, 2}, rng);
        LinearOp u = haar_unitary({2}, rng);
        Observable obs = random_observable({2}, 2, rng);

        Timeline with_event;
        with_event.systems = {{"a", 2}, {"b", 2}};
        with_event.preselect(ForwardState(psi))
            .unitary(u, {1})
            .measure(obs, {0}, "m");

        // Build U·psi through the same embedding path the engine uses.
        CVec evolved = embed(u, {1}, {2, 2}).matrix * psi.amplitudes;
        Timeline direct;
        direct.systems = {{"a", 2}, {"b", 2}};
        direct.preselect(ForwardState(Ket(evolved, {2, 2})))
            .measure(obs, {0}, "m");

        RunResult r1 = enumerate(with_event);
        RunResult r2 = enumerate(direct);
        // Same floating-point path on both sides: bitwise equality.
        for (std::size_t o = 0; o < 2; ++o) {
            CHECK(r1.conditional("m").probabilities[o] ==
                  r2.conditional("m").probabilities[o]);
        }
    }
}

TEST_CASE("law of total probability on the built-in experiments") {
    for (const auto& [name, timeline] : builtin_timelines()) {
        INFO("experiment: " << name);
        check_total_probability(timeline);
    }
}

TEST_CASE("three consecutive measurements of one variable agree") {
    SplitMix64 rng(42);
    for (int trial = 0; trial < 30; ++trial) {
        const int d = 2 + static_cast<int>(rng.next_u64() % 3);
        const int outcomes = 2 + static_cast<int>(rng.next_u64() %
                                                  static_cast<unsigned>(d - 1));
        Observable obs = random_observable({d}, outcomes, rng);
        Ket psi = random_ket({d}, rng);

        Timeline t;
        t.systems = {{"q", d}};
        t.preselect(ForwardState(psi))
            .measure(obs, {0}, "m1")
            .measure(obs, {0}, "m2")
            .measure(obs, {0}, "m3");

        for (int k = 0; k < outcomes; ++k) {
            Timeline conditioned = t;
            conditioned.postselect("m1", k);
            RunResult r = [&]() -> RunResult {
                try {
                    return enumerate(conditioned);
                } catch (const EmptyEnsemble&) {
                    return RunResult{};
                }
            }();
            if (r.measurements.empty()) continue;
            CHECK(std::abs(r.conditional("m2").probability_of_index(k) - 1.0) <
                  1e-12);
            CHECK(std::abs(r.conditional("m3").probability_of_index(k) - 1.0) <
                  1e-12);
        }
    }
}

TEST_CASE("a unitary between measurements, against hand values") {
    // |0⟩, measure σ_z (certain), Hadamard, measure σ_z again: uniform.
    const double r = 1.0 / std::sqrt(2.0);
    CMat h(2, 2);
    h << r, r, r, -r;

    Timeline t;
    t.systems = {{"q", 2}};
    t.preselect(ForwardState(Ket::basis(2, 0)))
        .measure(Observable::sigma_z(), {0}, "before")
        .unitary(LinearOp(h, {2}), {0})
        .measure(Observable::sigma_z(), {0}, "after");
    RunResult r1 = enumerate(t);
    CHECK(r1.conditional("before").probability_of_eigenvalue(+1.0) == 1.0);
    CHECK(r1.conditional("after").probability_of_eigenvalue(+1.0) == 0.5);
    CHECK(r1.conditional("after").probability_of_eigenvalue(-1.0) == 0.5);

    // Post-selecting "after" leaves "before" certain: the selection cannot
    // rewrite the earlier eigenstate.
    t.postselect("after", 0);
    RunResult r2 = enumerate(t);
    CHECK(r2.conditional("before").probability_of_eigenvalue(+1.0) == 1.0);
    CHECK(r2.post_selection_probability == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("two postselect events compose") {
    // Maximally entangled pair: both σ_z outcomes agree, so selecting both
    // sides on +1 has probability 1/2 and pins the intermediate σ_z.
    Timeline t;
    t.systems = {{"sys", 2}, {"anc", 2}};
    t.preselect(maximally_entangled(2))
        .measure(Observable::sigma_z(), {0}, "mid")
        .measure(Observable::sigma_z(), {0}, "sel_sys")
        .measure(Observable::sigma_z(), {1}, "sel_anc")
        .postselect("sel_sys", 1)
        .postselect("sel_anc", 1);
    RunResult r = enumerate(t);
    CHECK(r.conditional("mid").probability_of_eigenvalue(+1.0) == 1.0);
    CHECK(r.post_selection_probability == doctest::Approx(0.5).epsilon(1e-14));

    // Selecting opposite outcomes on the two sides empties the ensemble.
    Timeline clash = t;
    std::get<PostselectEvent>(clash.events.back()).outcome = 0;
    CHECK_THROWS_AS(enumerate(clash), EmptyEnsemble);
}

TEST_CASE("mixed qutrit and qubit systems") {
    SplitMix64 rng(43);
    Timeline t;
    t.systems = {{"trit", 3}, {"bit", 2}};
    t.preselect(ForwardState(random_ket({3, 2}, rng)))
        .measure(Observable::projector_onto(Ket::basis(3, 1)), {0}, "box")
        .measure(Observable::sigma_x(), {1}, "spin");
    RunResult r = enumerate(t);
    CHECK(r.branch_count <= 4);

    // Marginal of the qutrit probe matches the Born rule on the reduced
    // state computed by the independent partial-trace oracle.
    const auto& pre = std::get<PreselectEvent>(t.events[0]).state;
    CMat reduced = tsv_test::oracle_partial_trace(
        LinearOp::outer(pre.ket).matrix, {3, 2}, {0});
    const double expect = reduced(1, 1).real();
    CHECK(std::abs(r.conditional("box").probability_of_eigenvalue(1.0) -
                   expect) < 1e-13);
}

TEST_CASE("sampling is deterministic under a fixed seed") {
    Timeline t = erase_past_timeline(Observable::sigma_z());
    SampleOptions opts{5000, 0xfeed, true};
    RunResult r1 = sample(t, opts);
    RunResult r2 = sample(t, opts);
    REQUIRE(r1.sample_stats.has_value());
    REQUIRE(r2.sample_stats.has_value());
    CHECK(r1.sample_stats->accepted == r2.sample_stats->accepted);
    CHECK(r1.sample_stats->sequences == r2.sample_stats->sequences);
    for (std::size_t mi = 0; mi < r1.measurements.size(); ++mi) {
        for (std::size_t o = 0; o < r1.measurements[mi].conditional.size();
             ++o) {
            CHECK(r1.measurements[mi].conditional.probabilities[o] ==
                  r2.measurements[mi].conditional.probabilities[o]);
        }
    }
}

TEST_CASE("sampled frequencies sit in the binomial band") {
    // 10^5 shots of σ_x on |0⟩: p̂(+1) within 5σ of 0.5.
    Timeline t;
    t.systems = {{"q", 2}};
    t.preselect(ForwardState(Ket::basis(2, 0)))
        .measure(Observable::sigma_x(), {0}, "m");
    RunResult r = sample(t, 100000, 7);
    const double sigma = std::sqrt(0.25 / 100000.0);
    CHECK(std::abs(r.conditional("m").probability_of_eigenvalue(+1.0) - 0.5) <
          5.0 * sigma);
}

TEST_CASE("sampled conditionals converge to enumerate's on the built-ins") {
    for (const auto& [name, timeline] : builtin_timelines()) {
        INFO("experiment: " << name);
        RunResult exact = enumerate(timeline);
        RunResult sampled = sample(timeline, 100000, 99);
        REQUIRE(sampled.sample_stats.has_value());
        const double n = static_cast<double>(sampled.sample_stats->accepted);
        REQUIRE(n > 0);
        for (std::size_t mi = 0; mi < exact.measurements.size(); ++mi) {
            const auto& label = exact.measurements[mi].label;
            const OutcomeDistribution& pe = exact.conditional(label);
            const OutcomeDistribution& ps = sampled.conditional(label);
            for (std::size_t o = 0; o < pe.size(); ++o) {
                const double p = pe.probabilities[o];
                const double band =
                    5.0 * std::sqrt(std::max(p * (1.0 - p), 0.0) / n) + 1e-9;
                CHECK(std::abs(ps.probabilities[o] - p) <= band);
            }
        }
        // Acceptance rate tracks the exact post-selection probability.
        const double q = exact.post_selection_probability;
        const double band =
            5.0 * std::sqrt(q * (1.0 - q) / 100000.0) + 1e-9;
        CHECK(std::abs(sampled.post_selection_probability - q) <= band);
    }
}

TEST_CASE("sample distinguishes bad luck from impossible selections") {
    Timeline t;
    t.systems = {{"q", 2}};
    t.preselect(ForwardState(Ket::basis(2, 0)))
        .measure(Observable::projector_onto(Ket::basis(2, 1)), {0}, "m")
        .postselect("m", 1);
    CHECK_THROWS_AS(sample(t, 100, 5), EmptyEnsemble);
}

TEST_CASE("sample requires at least one shot") {
    Timeline t;
    t.systems = {{"q", 2}};
    t.preselect(ForwardState(Ket::basis(2, 0)))
        .measure(Observable::sigma_z(), {0}, "m");
    CHECK_THROWS(sample(t, 0, 1));
}
