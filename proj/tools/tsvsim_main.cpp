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

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "tsv/experiments.hpp"
#include "tsv/protocols.hpp"
#include "tsv/random_states.hpp"
#include "tsv/scenario.hpp"
#include "tsv/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitEmptyEnsemble = 3;
constexpr int kExitInternal = 4;

std::string g12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::string(buf);
}

std::uint64_t default_seed() {
    if (const char* env = std::getenv("TSVSIM_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            std::cerr << "warning: ignoring non-numeric TSVSIM_SEED\n";
        }
    }
    return 1;
}

tsv::Observable observable_by_name(const std::string& name) {
    if (name == "sigma_x") return tsv::Observable::sigma_x();
    if (name == "sigma_y") return tsv::Observable::sigma_y();
    if (name == "sigma_z") return tsv::Observable::sigma_z();
    throw tsv::UnknownLabel("unknown observable '" + name +
                            "' (use sigma_x, sigma_y or sigma_z)");
}

void print_distribution_table(const std::string& label,
                              const tsv::OutcomeDistribution& dist) {
    std::cout << "  " << label << ":\n";
    for (std::size_t i = 0; i < dist.size(); ++i) {
        std::cout << "    eigenvalue " << g12(dist.labels[i].eigenvalue)
                  << " (outcome " << dist.labels[i].index
                  << "): " << g12(dist.probabilities[i]) << "\n";
    }
}

void emit_result(const tsv::RunResult& result, const std::string& mode,
                 const std::string& format) {
    if (format == "csv") {
        std::cout << tsv::result_to_csv(result);
    } else {
        std::cout << tsv::result_to_json(result, mode).dump(2) << "\n";
    }
}

int cmd_run(const std::string& path, bool exact, std::uint64_t shots,
            std::uint64_t seed, const std::string& format) {
    tsv::Timeline timeline = tsv::scenario_from_file(path);
    std::vector<tsv::ValidationIssue> issues = tsv::validate(timeline);
    if (!issues.empty()) {
        for (const tsv::ValidationIssue& issue : issues) {
            std::cerr << "error: " << issue.message << "\n";
        }
        return kExitValidation;
    }
    if (exact || shots == 0) {
        emit_result(tsv::enumerate(timeline), "exact", format);
    } else {
        emit_result(tsv::sample(timeline, shots, seed), "sampled", format);
    }
    return kExitOk;
}

int cmd_list() {
    for (const tsv::ExperimentInfo& info : tsv::experiment_catalog()) {
        std::cout << info.name << " — " << info.summary << "\n";
    }
    return kExitOk;
}

int experiment_three_box() {
    for (int box = 0; box < 2; ++box) {
        tsv::RunResult r = tsv::enumerate(tsv::three_box_timeline(box));
        const double p = r.conditional("probe").probability_of_index(1);
        std::cout << "box " << box + 1
                  << ": probability of finding the ball = " << g12(p) << "\n";
    }
    return kExitOk;
}

int experiment_erase() {
    std::cout << "qubit entangled with a guarded ancilla, post-selected on "
                 "|+>\n";
    for (const char* name : {"sigma_z", "sigma_x"}) {
        tsv::RunResult r =
            tsv::enumerate(tsv::erase_past_timeline(observable_by_name(name)));
        print_distribution_table(std::string("intermediate ") + name,
                                 r.conditional("mid"));
    }
    std::cout << "statistics follow the backward state alone: sigma_x is "
                 "certain, sigma_z is uniform\n";
    return kExitOk;
}

int experiment_flip() {
    using tsv::cx;
    auto show = [](const char* name, const tsv::BackwardState& chi) {
        tsv::ForwardState out = tsv::flip_backward_to_forward(chi);
        // +0.0 folds negative zeros for display.
        std::cout << "  flip(" << name << ") -> ["
                  << g12(out.ket.amplitudes(0).real() + 0.0)
                  << (out.ket.amplitudes(0).imag() < 0 ? "-" : "+")
                  << g12(std::abs(out.ket.amplitudes(0).imag())) << "i, "
                  << g12(out.ket.amplitudes(1).real() + 0.0)
                  << (out.ket.amplitudes(1).imag() < 0 ? "-" : "+")
                  << g12(std::abs(out.ket.amplitudes(1).imag())) << "i]\n";
    };
    show("<up|", tsv::BackwardState(tsv::Ket::basis(2, 0)));
    show("<down|", tsv::BackwardState(tsv::Ket::basis(2, 1)));

    const tsv::BackwardState chi(
        tsv::Ket((tsv::CVec(2) << 0.6, cx(0.0, 0.8)).finished(), {2}));
    tsv::Timeline t = tsv::flip_verification_timeline(
        chi.ket, tsv::flip_backward_to_forward(chi).ket);
    const double p =
        tsv::enumerate(t).conditional("verify").probability_of_index(1);
    std::cout << "singlet verification: ancilla matches the flipped state "
                 "with probability "
              << g12(p) << "\n";
    return kExitOk;
}

int experiment_teleport(const std::string& a_name, const std::string& a_value,
                        const std::string& b_name, std::uint64_t shots,
                        std::uint64_t seed) {
    tsv::Observable A = observable_by_name(a_name);
    tsv::Observable B = observable_by_name(b_name);
    double a_eig = 0.0;
    try {
        a_eig = std::stod(a_value);
    } catch (const std::exception&) {
        throw tsv::UnknownLabel("--a must be an eigenvalue such as +1 or -1");
    }
    const int a_index = static_cast<int>(A.outcome_of_eigenvalue(a_eig));

    std::optional<tsv::SampleOptions> sampling;
    if (shots > 0) sampling = tsv::SampleOptions{shots, seed, false};
    tsv::TeleportReport report =
        tsv::teleport_backward_experiment(A, a_index, B, sampling);

    std::cout << "Victor selects " << a_name << " = " << g12(a_eig)
              << " (probability " << g12(report.post_probability) << ")\n";
    print_distribution_table("Victoria's conditional outcomes (exact)",
                             report.victoria_conditional);
    print_distribution_table("law |<B=b|A=a>|^2", report.backward_born);
    for (int k = 0; k < 4; ++k) {
        print_distribution_table(
            "Bell outcome " + std::to_string(k) + " (correction " +
                report.corrections[static_cast<std::size_t>(k)] + ")",
            report.per_bell_conditional[static_cast<std::size_t>(k)]);
    }
    double max_dev = report.victoria_conditional.max_abs_diff(report.backward_born);
    for (const tsv::OutcomeDistribution& d : report.per_bell_conditional) {
        max_dev = std::max(max_dev, d.max_abs_diff(report.backward_born));
    }
    std::cout << "max deviation from the law: " << g12(max_dev) << "\n";
    if (report.sampled) {
        const tsv::SampleStats& stats = *report.sampled->sample_stats;
        std::cout << "sampled: " << stats.accepted << "/" << stats.shots
                  << " shots accepted (seed " << stats.seed << ")\n";
        if (stats.accepted > 0) {
            print_distribution_table("Victoria's conditional outcomes (sampled)",
                                     report.sampled->conditional("victoria"));
        }
    }
    return kExitOk;
}

int experiment_cloning(const std::string& channel_kind, int trials,
                       std::uint64_t seed) {
    if (channel_kind == "ideal-cloner" || channel_kind == "identity") {
        tsv::Channel ch = channel_kind == "identity"
                              ? tsv::Channel::identity({2, 2})
                              : tsv::ideal_backward_cloner();
        tsv::SignalingReport report = tsv::cloning_signaling_audit(ch);
        std::cout << "channel: " << channel_kind << " (physical: "
                  << (report.candidate_physical ? "yes" : "no") << ")\n";
        using Basis = tsv::SignalingReport::Basis;
        auto show = [&](const char* name, Basis sub) {
            for (Basis later : {Basis::z, Basis::x}) {
                const auto& p = report.stats(sub, later);
                std::cout << "  " << name << " pairs, later choice "
                          << (later == Basis::z ? "sigma_z" : "sigma_x")
                          << ": [" << g12(p[0]) << ", " << g12(p[1]) << ", "
                          << g12(p[2]) << ", " << g12(p[3]) << "]\n";
            }
        };
        show("sigma_z", Basis::z);
        show("sigma_x", Basis::x);
        std::cout << "trace_distance " << g12(report.trace_distance) << "\n";
        return kExitOk;
    }
    if (channel_kind == "random-cptp") {
        tsv::SplitMix64 rng(seed);
        double max_distance = 0.0;
        for (int i = 0; i < trials; ++i) {
            const int n_kraus = 1 + static_cast<int>(rng.next_u64() % 6);
            tsv::Channel ch = tsv::random_cptp_channel({2, 2}, n_kraus, rng);
            max_distance = std::max(
                max_distance, tsv::cloning_signaling_audit(ch).trace_distance);
        }
        std::cout << "random CPTP channels: " << trials
                  << " trials, max trace_distance " << g12(max_distance)
                  << "\n";
        return kExitOk;
    }
    throw tsv::UnknownExperiment(
        "unknown channel '" + channel_kind +
        "' (use ideal-cloner, identity or random-cptp)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pre- and post-selected quantum systems: exact timeline "
                 "engine, probability rules and protocol demos"};
    app.set_version_flag("--version", tsv::kVersion);
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "evaluate a scenario file");
    std::string scenario_path;
    bool exact = false;
    std::uint64_t shots = 0;
    std::uint64_t seed = default_seed();
    std::string format = "json";
    run->add_option("scenario", scenario_path, "scenario JSON file")
        ->required();
    run->add_flag("--exact", exact, "exact branch enumeration (default)");
    run->add_option("--shots", shots, "sample this many shots instead");
    run->add_option("--seed", seed, "sampler seed (default $TSVSIM_SEED or 1)");
    run->add_option("--format", format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));

    // experiment
    auto* experiment =
        app.add_subcommand("experiment", "run a built-in experiment");
    std::string experiment_name;
    std::string a_name = "sigma_z", a_value = "+1", b_name = "sigma_z";
    std::string channel_kind = "ideal-cloner";
    int trials = 100;
    std::uint64_t exp_shots = 0;
    std::uint64_t exp_seed = default_seed();
    experiment->add_option("name", experiment_name, "experiment name")
        ->required();
    experiment->add_option("--A", a_name, "Victor's observable");
    experiment->add_option("--a", a_value, "Victor's selected eigenvalue");
    experiment->add_option("--B", b_name, "Victoria's observable");
    experiment->add_option("--channel", channel_kind,
                           "ideal-cloner | identity | random-cptp");
    experiment->add_option("--trials", trials, "random channel trials");
    experiment->add_option("--shots", exp_shots,
                           "also run the sampled variant");
    experiment->add_option("--seed", exp_seed, "sampler / generator seed");

    // list
    auto* list = app.add_subcommand("list", "list built-in experiments");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return kExitValidation;
    }

    try {
        if (run->parsed()) {
            if (exact && shots > 0) {
                std::cerr << "error: choose either --exact or --shots\n";
                return kExitValidation;
            }
            return cmd_run(scenario_path, exact, shots, seed, format);
        }
        if (list->parsed()) return cmd_list();
        if (experiment->parsed()) {
            if (experiment_name == "three-box") return experiment_three_box();
            if (experiment_name == "erase") return experiment_erase();
            if (experiment_name == "flip") return experiment_flip();
            if (experiment_name == "teleport-backward") {
                return experiment_teleport(a_name, a_value, b_name, exp_shots,
                                           exp_seed);
            }
            if (experiment_name == "cloning-audit") {
                return experiment_cloning(channel_kind, trials, exp_seed);
            }
            std::string names;
            for (const tsv::ExperimentInfo& info : tsv::experiment_catalog()) {
                names += " " + info.name;
            }
            throw tsv::UnknownExperiment("unknown experiment '" +
                                         experiment_name + "'; available:" +
                                         names);
        }
    } catch (const tsv::SchemaError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const tsv::ValidationFailed& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const tsv::UnknownExperiment& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const tsv::UnknownLabel& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const tsv::EmptyEnsemble& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitEmptyEnsemble;
    } catch (const tsv::InconsistentSelection& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitEmptyEnsemble;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitOk;
}
