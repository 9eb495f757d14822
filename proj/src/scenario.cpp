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

#include "tsv/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "tsv/states.hpp"
#include "tsv/version.hpp"

namespace tsv {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& msg) { throw SchemaError(msg); }

[[noreturn]] void fail_event(std::size_t index, const std::string& msg) {
    fail("event " + std::to_string(index) + ": " + msg);
}

std::string where(std::size_t index) {
    return "event " + std::to_string(index);
}

CVec parse_amplitudes(const json& arr, std::size_t index, const char* what) {
    if (!arr.is_array() || arr.empty()) {
        fail_event(index, std::string(what) + " must be a non-empty array of "
                                              "[re, im] pairs");
    }
    CVec v(arr.size());
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const json& pair = arr[i];
        if (!pair.is_array() || pair.size() != 2 ||
            !pair[0].is_number() || !pair[1].is_number()) {
            fail_event(index, std::string(what) + " entry " +
                                  std::to_string(i) +
                                  " is not a [re, im] number pair");
        }
        v(static_cast<Eigen::Index>(i)) =
            cx(pair[0].get<double>(), pair[1].get<double>());
    }
    return v;
}

json dump_amplitudes(const CVec& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        arr.push_back(json::array({v(i).real(), v(i).imag()}));
    }
    return arr;
}

json dump_matrix(const CMat& m) {
    json arr = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            arr.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
        }
    }
    return arr;
}

CMat parse_matrix(const json& arr, std::size_t index, const char* what) {
    CVec flat = parse_amplitudes(arr, index, what);
    const auto n = static_cast<Eigen::Index>(
        std::llround(std::sqrt(static_cast<double>(flat.size()))));
    if (n * n != flat.size()) {
        fail_event(index, std::string(what) +
                              " must be a square row-major matrix; got " +
                              std::to_string(flat.size()) + " entries");
    }
    CMat m(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
        for (Eigen::Index c = 0; c < n; ++c) m(r, c) = flat(r * n + c);
    }
    return m;
}

Ket named_state(const std::string& name, const std::vector<int>& dims,
                std::size_t index) {
    if (name == "singlet") return singlet().ket;
    if (name == "bell_phi_plus") return bell_basis()[0].ket;
    if (name == "bell_phi_minus") return bell_basis()[1].ket;
    if (name == "bell_psi_plus") return bell_basis()[2].ket;
    if (name == "bell_psi_minus") return bell_basis()[3].ket;
    if (name == "max_entangled") {
        if (dims.size() != 2 || dims[0] != dims[1]) {
            fail_event(index,
                       "'max_entangled' needs two systems of equal dimension");
        }
        return maximally_entangled(dims[0]).ket;
    }
    fail_event(index, "unknown named state '" + name + "'");
}

LinearOp named_operator(const std::string& name, std::size_t index) {
    auto mat2 = [](cx a, cx b, cx c, cx d) {
        CMat m(2, 2);
        m << a, b, c, d;
        return LinearOp(std::move(m), {2});
    };
    const double r = 1.0 / std::sqrt(2.0);
    if (name == "sigma_x") return mat2(0, 1, 1, 0);
    if (name == "sigma_y") return mat2(0, cx(0, -1), cx(0, 1), 0);
    if (name == "sigma_z") return mat2(1, 0, 0, -1);
    if (name == "hadamard") return mat2(r, r, r, -r);
    if (name == "identity") return mat2(1, 0, 0, 1);
    fail_event(index, "unknown named operator '" + name + "'");
}

Observable named_observable(const std::string& name, std::size_t index) {
    if (name == "sigma_x") return Observable::sigma_x();
    if (name == "sigma_y") return Observable::sigma_y();
    if (name == "sigma_z") return Observable::sigma_z();
    fail_event(index, "unknown named observable '" + name + "'");
}

std::vector<int> parse_targets(const json& ev, const Timeline& t,
                               std::size_t index) {
    if (!ev.contains("targets") || !ev["targets"].is_array() ||
        ev["targets"].empty()) {
        fail_event(index, "missing or empty 'targets' array");
    }
    std::vector<int> out;
    for (const json& tgt : ev["targets"]) {
        if (!tgt.is_string()) {
            fail_event(index, "'targets' entries must be system names");
        }
        try {
            out.push_back(t.system_index(tgt.get<std::string>()));
        } catch (const UnknownLabel&) {
            fail_event(index,
                       "unknown system '" + tgt.get<std::string>() + "'");
        }
    }
    return out;
}

std::vector<int> target_dims(const Timeline& t, const std::vector<int>& targets) {
    std::vector<int> out;
    for (int i : targets) out.push_back(t.systems[static_cast<std::size_t>(i)].dim);
    return out;
}

}  // namespace

Timeline scenario_from_json(const json& doc) {
    if (!doc.is_object()) fail("scenario document must be a JSON object");
    if (!doc.contains("version") || !doc["version"].is_number_integer() ||
        doc["version"].get<int>() != kScenarioSchemaVersion) {
        fail("scenario 'version' must be the integer " +
             std::to_string(kScenarioSchemaVersion));
    }
    if (!doc.contains("systems") || !doc["systems"].is_array() ||
        doc["systems"].empty()) {
        fail("scenario needs a non-empty 'systems' array");
    }

    Timeline t;
    std::size_t total = 1;
    for (std::size_t i = 0; i < doc["systems"].size(); ++i) {
        const json& s = doc["systems"][i];
        if (!s.is_object() || !s.contains("name") || !s["name"].is_string() ||
            !s.contains("dim") || !s["dim"].is_number_integer()) {
            fail("system " + std::to_string(i) +
                 " must be {\"name\": string, \"dim\": integer}");
        }
        const int dim = s["dim"].get<int>();
        if (dim < 2 || static_cast<std::size_t>(dim) > kMaxAmplitudes) {
            fail("system " + std::to_string(i) + ": dimension " +
                 std::to_string(dim) + " out of range [2, " +
                 std::to_string(kMaxAmplitudes) + "]");
        }
        total *= static_cast<std::size_t>(dim);
        if (total > kMaxAmplitudes) {
            fail("systems span more than " + std::to_string(kMaxAmplitudes) +
                 " amplitudes");
        }
        t.systems.push_back({s["name"].get<std::string>(), dim});
    }

    if (!doc.contains("events") || !doc["events"].is_array()) {
        fail("scenario needs an 'events' array");
    }

    for (std::size_t i = 0; i < doc["events"].size(); ++i) {
        const json& ev = doc["events"][i];
        if (!ev.is_object() || !ev.contains("type") || !ev["type"].is_string()) {
            fail_event(i, "missing string field 'type'");
        }
        const std::string type = ev["type"].get<std::string>();
        try {

        if (type == "preselect") {
            if (!ev.contains("state")) fail_event(i, "missing 'state'");
            Ket state = [&] {
                if (ev["state"].is_string()) {
                    return named_state(ev["state"].get<std::string>(), t.dims(),
                                       i);
                }
                CVec v = parse_amplitudes(ev["state"], i, "'state'");
                if (v.size() != t.total_dim()) {
                    fail_event(i, "'state' has " + std::to_string(v.size()) +
                                      " amplitudes but the systems span " +
                                      std::to_string(t.total_dim()));
                }
                return Ket(std::move(v), t.dims());
            }();
            if (state.dims != t.dims()) {
                // Named states carry their own layout; re-wrap onto the
                // declared systems when the flat size matches.
                if (state.dim() != t.total_dim()) {
                    fail_event(i, "'state' does not span the declared systems");
                }
                state = Ket(state.amplitudes, t.dims());
            }
            if (!state.is_normalized()) {
                fail_event(i, "'state' is not normalized");
            }
            t.preselect(ForwardState(std::move(state)));
        } else if (type == "unitary") {
            std::vector<int> targets = parse_targets(ev, t, i);
            if (!ev.contains("matrix")) fail_event(i, "missing 'matrix'");
            LinearOp op = [&] {
                if (ev["matrix"].is_string()) {
                    return named_operator(ev["matrix"].get<std::string>(), i);
                }
                CMat m = parse_matrix(ev["matrix"], i, "'matrix'");
                std::vector<int> dims = target_dims(t, targets);
                int want = 1;
                for (int d : dims) want *= d;
                if (m.rows() != want) {
                    fail_event(i, "'matrix' side " + std::to_string(m.rows()) +
                                      " does not match targets (" +
                                      std::to_string(want) + ")");
                }
                return LinearOp(std::move(m), std::move(dims));
            }();
            t.unitary(std::move(op), std::move(targets));
        } else if (type == "measure") {
            std::vector<int> targets = parse_targets(ev, t, i);
            if (!ev.contains("label") || !ev["label"].is_string()) {
                fail_event(i, "missing string field 'label'");
            }
            if (!ev.contains("observable")) fail_event(i, "missing 'observable'");
            Observable obs = [&]() -> Observable {
                if (ev["observable"].is_string()) {
                    return named_observable(ev["observable"].get<std::string>(),
                                            i);
                }
                CMat m = parse_matrix(ev["observable"], i, "'observable'");
                std::vector<int> dims = target_dims(t, targets);
                int want = 1;
                for (int d : dims) want *= d;
                if (m.rows() != want) {
                    fail_event(i, "'observable' side " +
                                      std::to_string(m.rows()) +
                                      " does not match targets (" +
                                      std::to_string(want) + ")");
                }
                try {
                    return Observable(LinearOp(std::move(m), std::move(dims)));
                } catch (const NotHermitian&) {
                    fail_event(i, "'observable' is not Hermitian");
                }
            }();
            t.measure(std::move(obs), std::move(targets),
                      ev["label"].get<std::string>());
        } else if (type == "postselect") {
            if (!ev.contains("label") || !ev["label"].is_string()) {
                fail_event(i, "missing string field 'label'");
            }
            if (!ev.contains("outcome") || !ev["outcome"].is_number_integer()) {
                fail_event(i, "missing integer field 'outcome'");
            }
            t.postselect(ev["label"].get<std::string>(),
                         ev["outcome"].get<int>());
        } else if (type == "guard") {
            t.guard(parse_targets(ev, t, i));
        } else {
            fail(where(i) + ": unknown event type '" + type + "'");
        }
        } catch (const SchemaError&) {
            throw;
        } catch (const Error& e) {
            fail_event(i, e.what());
        }
    }
    return t;
}

Timeline scenario_from_string(const std::string& text) {
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded()) fail("scenario is not valid JSON");
    return scenario_from_json(doc);
}

Timeline scenario_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open scenario file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return scenario_from_string(buf.str());
}

json scenario_to_json(const Timeline& t) {
    json doc;
    doc["version"] = kScenarioSchemaVersion;
    doc["systems"] = json::array();
    for (const SystemDecl& s : t.systems) {
        doc["systems"].push_back({{"name", s.name}, {"dim", s.dim}});
    }

    auto target_names = [&](const std::vector<int>& targets) {
        json arr = json::array();
        for (int i : targets) {
            arr.push_back(t.systems[static_cast<std::size_t>(i)].name);
        }
        return arr;
    };

    doc["events"] = json::array();
    for (const Event& ev : t.events) {
        json e;
        if (const auto* pre = std::get_if<PreselectEvent>(&ev)) {
            e["type"] = "preselect";
            e["state"] = dump_amplitudes(pre->state.ket.amplitudes);
        } else if (const auto* u = std::get_if<UnitaryEvent>(&ev)) {
            e["type"] = "unitary";
            e["targets"] = target_names(u->targets);
            e["matrix"] = dump_matrix(u->op.matrix);
        } else if (const auto* m = std::get_if<MeasureEvent>(&ev)) {
            e["type"] = "measure";
            e["targets"] = target_names(m->targets);
            e["observable"] = dump_matrix(m->obs.op().matrix);
            e["label"] = m->label;
        } else if (const auto* p = std::get_if<PostselectEvent>(&ev)) {
            e["type"] = "postselect";
            e["label"] = p->label;
            e["outcome"] = p->outcome;
        } else if (const auto* g = std::get_if<GuardEvent>(&ev)) {
            e["type"] = "guard";
            e["targets"] = target_names(g->targets);
        }
        doc["events"].push_back(std::move(e));
    }
    return doc;
}

json result_to_json(const RunResult& result, const std::string& mode) {
    json doc;
    doc["version"] = kVersion;
    doc["schema_version"] = kScenarioSchemaVersion;
    doc["mode"] = mode;
    doc["post_selection_probability"] = result.post_selection_probability;
    doc["branch_count"] = result.branch_count;
    if (result.sample_stats) {
        doc["seed"] = result.sample_stats->seed;
        doc["shots"] = result.sample_stats->shots;
        doc["accepted"] = result.sample_stats->accepted;
    }
    doc["measurements"] = json::array();
    for (const MeasurementRecord& rec : result.measurements) {
        json m;
        m["label"] = rec.label;
        m["outcomes"] = json::array();
        for (std::size_t i = 0; i < rec.conditional.size(); ++i) {
            m["outcomes"].push_back(
                {{"eigenvalue", rec.conditional.labels[i].eigenvalue},
                 {"index", rec.conditional.labels[i].index},
                 {"probability", rec.conditional.probabilities[i]}});
        }
        doc["measurements"].push_back(std::move(m));
    }
    return doc;
}

std::string result_to_csv(const RunResult& result) {
    auto g17 = [](double v) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    std::ostringstream os;
    os << "label,eigenvalue,outcome_index,probability\n";
    for (const MeasurementRecord& rec : result.measurements) {
        for (std::size_t i = 0; i < rec.conditional.size(); ++i) {
            os << rec.label << ',' << g17(rec.conditional.labels[i].eigenvalue)
               << ',' << rec.conditional.labels[i].index << ','
               << g17(rec.conditional.probabilities[i]) << '\n';
        }
    }
    return os.str();
}

}  // namespace tsv
