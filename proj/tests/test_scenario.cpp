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

#include <nlohmann/json.hpp>

#include <cmath>
#include <sstream>
#include <string>

#include "tsv/experiments.hpp"
#include "tsv/scenario.hpp"

using namespace tsv;
using nlohmann::json;

namespace {

json minimal_doc() {
    return json::parse(R"({
      "version": 1,
      "systems": [{"name": "q", "dim": 2}],
      "events": [
        {"type": "preselect", "state": [[1.0, 0.0], [0.0, 0.0]]},
        {"type": "measure", "targets": ["q"], "observable": "sigma_x",
         "label": "m"}
      ]
    })");
}

bool same_vec(const CVec& a, const CVec& b) {
    return a.size() == b.size() && (a - b).cwiseAbs().maxCoeff() == 0.0;
}
bool same_mat(const CMat& a, const CMat& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() &&
           (a - b).cwiseAbs().maxCoeff() == 0.0;
}

bool timelines_identical(const Timeline& a, const Timeline& b) {
    if (a.systems.size() != b.systems.size()) return false;
    for (std::size_t i = 0; i < a.systems.size(); ++i) {
        if (a.systems[i].name != b.systems[i].name ||
            a.systems[i].dim != b.systems[i].dim) {
            return false;
        }
    }
    if (a.events.size() != b.events.size()) return false;
    for (std::size_t i = 0; i < a.events.size(); ++i) {
        if (a.events[i].index() != b.events[i].index()) return false;
        if (const auto* pa = std::get_if<PreselectEvent>(&a.events[i])) {
            const auto& pb = std::get<PreselectEvent>(b.events[i]);
            if (!same_vec(pa->state.ket.amplitudes, pb.state.ket.amplitudes)) {
                return false;
            }
        } else if (const auto* ua = std::get_if<UnitaryEvent>(&a.events[i])) {
            const auto& ub = std::get<UnitaryEvent>(b.events[i]);
            if (ua->targets != ub.targets || !same_mat(ua->op.matrix, ub.op.matrix)) {
                return false;
            }
        } else if (const auto* ma = std::get_if<MeasureEvent>(&a.events[i])) {
            const auto& mb = std::get<MeasureEvent>(b.events[i]);
            if (ma->targets != mb.targets || ma->label != mb.label ||
                !same_mat(ma->obs.op().matrix, mb.obs.op().matrix)) {
                return false;
            }
        } else if (const auto* sa = std::get_if<PostselectEvent>(&a.events[i])) {
            const auto& sb = std::get<PostselectEvent>(b.events[i]);
            if (sa->label != sb.label || sa->outcome != sb.outcome) {
                return false;
            }
        } else if (const auto* ga = std::get_if<GuardEvent>(&a.events[i])) {
            const auto& gb = std::get<GuardEvent>(b.events[i]);
            if (ga->targets != gb.targets) return false;
        }
    }
    return true;
}

}  // namespace

TEST_CASE("minimal scenario parses and runs") {
    Timeline t = scenario_from_json(minimal_doc());
    CHECK(validate(t).empty());
    RunResult r = enumerate(t);
    CHECK(r.conditional("m").probability_of_eigenvalue(+1.0) == 0.5);
}

TEST_CASE("named constants expand correctly") {
    json doc = json::parse(R"({
      "version": 1,
      "systems": [{"name": "a", "dim": 2}, {"name": "b", "dim": 2}],
      "events": [
        {"type": "preselect", "state": "singlet"},
        {"type": "guard", "targets": ["b"]},
        {"type": "unitary", "targets": ["a"], "matrix": "hadamard"},
        {"type": "measure", "targets": ["a"], "observable": "sigma_z",
         "label": "m"}
      ]
    })");
    Timeline t = scenario_from_json(doc);
    CHECK(validate(t).empty());
    const auto& pre = std::get<PreselectEvent>(t.events[0]);
    CHECK(same_vec(pre.state.ket.amplitudes, singlet().ket.amplitudes));

    json doc_qutrit = json::parse(R"({
      "version": 1,
      "systems": [{"name": "a", "dim": 3}, {"name": "b", "dim": 3}],
      "events": [{"type": "preselect", "state": "max_entangled"}]
    })");
    Timeline t3 = scenario_from_json(doc_qutrit);
    CHECK(same_vec(std::get<PreselectEvent>(t3.events[0]).state.ket.amplitudes,
                   maximally_entangled(3).ket.amplitudes));
}

TEST_CASE("schema errors name the offending event") {
    json doc = minimal_doc();
    doc["events"][1]["type"] = "observe";
    try {
        scenario_from_json(doc);
        FAIL("expected SchemaError");
    } catch (const SchemaError& e) {
        CHECK(std::string(e.what()).find("event 1") != std::string::npos);
        CHECK(std::string(e.what()).find("observe") != std::string::npos);
    }

    json doc2 = minimal_doc();
    doc2["events"][0]["state"] = json::array({json::array({1.0, 0.0})});
    try {
        scenario_from_json(doc2);
        FAIL("expected SchemaError");
    } catch (const SchemaError& e) {
        CHECK(std::string(e.what()).find("event 0") != std::string::npos);
    }

    json doc3 = minimal_doc();
    doc3["events"][1]["targets"] = json::array({"nope"});
    CHECK_THROWS_AS(scenario_from_json(doc3), SchemaError);

    json doc4 = minimal_doc();
    doc4["version"] = 99;
    CHECK_THROWS_AS(scenario_from_json(doc4), SchemaError);

    json doc5 = minimal_doc();
    doc5["events"][1]["observable"] =
        json::array({json::array({0.0, 0.0}), json::array({1.0, 0.0}),
                     json::array({0.0, 0.0}), json::array({0.0, 0.0})});
    try {
        scenario_from_json(doc5);
        FAIL("expected SchemaError");
    } catch (const SchemaError& e) {
        CHECK(std::string(e.what()).find("event 1") != std::string::npos);
        CHECK(std::string(e.what()).find("Hermitian") != std::string::npos);
    }

    CHECK_THROWS_AS(scenario_from_string("not json at all"), SchemaError);
}

TEST_CASE("non-unitary matrices are caught by validate") {
    json doc = json::parse(R"({
      "version": 1,
      "systems": [{"name": "q", "dim": 2}],
      "events": [
        {"type": "preselect", "state": [[1.0, 0.0], [0.0, 0.0]]},
        {"type": "unitary", "targets": ["q"],
         "matrix": [[1.0,0.0],[1.0,0.0],[0.0,0.0],[1.0,0.0]]},
        {"type": "measure", "targets": ["q"], "observable": "sigma_z",
         "label": "m"}
      ]
    })");
    Timeline t = scenario_from_json(doc);
    bool found = false;
    for (const ValidationIssue& issue : validate(t)) {
        found |= issue.code == ValidationIssue::Code::NotUnitary;
    }
    CHECK(found);
}

TEST_CASE("scenario round-trips through serialization") {
    // Parse → serialize → parse must reproduce the timeline exactly,
    // including every built-in experiment's timeline.
    Timeline t1 = scenario_from_json(minimal_doc());
    Timeline t2 = scenario_from_json(scenario_to_json(t1));
    CHECK(timelines_identical(t1, t2));

    for (const auto& [name, timeline] : builtin_timelines()) {
        INFO("experiment: " << name);
        json doc = scenario_to_json(timeline);
        Timeline parsed = scenario_from_json(doc);
        CHECK(timelines_identical(timeline, parsed));
        // Second generation documents are textually identical.
        CHECK(scenario_to_json(parsed).dump() == doc.dump());
    }
}

TEST_CASE("result documents carry 17-significant-digit probabilities") {
    Timeline t = three_box_timeline(0);
    RunResult r = enumerate(t);
    json doc = result_to_json(r, "exact");
    CHECK(doc["mode"] == "exact");
    CHECK(doc["branch_count"].get<std::size_t>() == r.branch_count);

    // JSON round-trip restores the exact binary value.
    json reparsed = json::parse(doc.dump());
    for (std::size_t mi = 0; mi < r.measurements.size(); ++mi) {
        for (std::size_t o = 0; o < r.measurements[mi].conditional.size();
             ++o) {
            CHECK(reparsed["measurements"][mi]["outcomes"][o]["probability"]
                      .get<double>() ==
                  r.measurements[mi].conditional.probabilities[o]);
        }
    }
}

TEST_CASE("csv and json report identical probabilities") {
    Timeline t = erase_past_timeline(Observable::sigma_z());
    RunResult r = enumerate(t);
    json doc = result_to_json(r, "exact");
    std::string csv = result_to_csv(r);

    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "label,eigenvalue,outcome_index,probability");

    std::size_t mi = 0, oi = 0;
    while (std::getline(lines, line)) {
        const auto last_comma = line.rfind(',');
        const double csv_p = std::stod(line.substr(last_comma + 1));
        const double json_p =
            doc["measurements"][mi]["outcomes"][oi]["probability"]
                .get<double>();
        CHECK(csv_p == json_p);
        if (++oi >= doc["measurements"][mi]["outcomes"].size()) {
            oi = 0;
            ++mi;
        }
    }
    CHECK(mi == doc["measurements"].size());
}

TEST_CASE("sampled results carry seed and shot metadata") {
    Timeline t = erase_past_timeline(Observable::sigma_x());
    RunResult r = sample(t, 2000, 123);
    json doc = result_to_json(r, "sampled");
    CHECK(doc["mode"] == "sampled");
    CHECK(doc["seed"].get<std::uint64_t>() == 123);
    CHECK(doc["shots"].get<std::uint64_t>() == 2000);
    CHECK(doc["accepted"].get<std::uint64_t>() ==
          r.sample_stats->accepted);
}
