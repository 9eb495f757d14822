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

#include "tsv/measure.hpp"

#include <cmath>
#include <numeric>

#include "tsv/timeline.hpp"

namespace tsv {

OutcomeDistribution::OutcomeDistribution(std::vector<OutcomeLabel> l,
                                         std::vector<double> p)
    : labels(std::move(l)), probabilities(std::move(p)) {
    if (labels.size() != probabilities.size()) {
        throw Error("outcome distribution: label/probability size mismatch");
    }
    double sum = 0.0;
    for (double v : probabilities) {
        if (!(v >= 0.0)) {
            throw Error("outcome distribution: negative or NaN probability");
        }
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-10) {
        throw Error("outcome distribution does not sum to 1");
    }
}

double OutcomeDistribution::probability_of_index(int outcome_index) const {
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i].index == outcome_index) return probabilities[i];
    }
    throw UnknownLabel("no outcome with index " + std::to_string(outcome_index));
}

double OutcomeDistribution::probability_of_eigenvalue(double value,
                                                      double tol) const {
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (std::abs(labels[i].eigenvalue - value) <= tol) {
            return probabilities[i];
        }
    }
    throw UnknownLabel("no outcome with eigenvalue " + std::to_string(value));
}

double OutcomeDistribution::max_abs_diff(const OutcomeDistribution& other) const {
    if (size() != other.size()) {
        throw DimMismatch("outcome distributions have different sizes");
    }
    double m = 0.0;
    for (std::size_t i = 0; i < size(); ++i) {
        m = std::max(m, std::abs(probabilities[i] - other.probabilities[i]));
    }
    return m;
}

namespace {

std::vector<OutcomeLabel> labels_of(const Observable& obs) {
    std::vector<OutcomeLabel> out;
    out.reserve(obs.outcome_count());
    for (std::size_t i = 0; i < obs.outcome_count(); ++i) {
        out.push_back({obs.eigenvalue(i), static_cast<int>(i)});
    }
    return out;
}

OutcomeDistribution normalized_weights(const Observable& obs,
                                       std::vector<double> weights) {
    const double total =
        std::accumulate(weights.begin(), weights.end(), 0.0);
    if (total <= kSelectionTol) {
        throw InconsistentSelection(
            "pre/post-selection pair assigns zero weight to every branch");
    }
    for (double& w : weights) w /= total;
    return OutcomeDistribution(labels_of(obs), std::move(weights));
}

}  // namespace

OutcomeDistribution born(const ForwardState& state, const Observable& obs) {
    if (state.dims() != obs.dims()) {
        throw DimMismatch("born: state and observable dims differ");
    }
    std::vector<double> probs;
    probs.reserve(obs.outcome_count());
    for (std::size_t n = 0; n < obs.outcome_count(); ++n) {
        probs.push_back(
            (obs.projector(n).matrix * state.ket.amplitudes).squaredNorm());
    }
    return OutcomeDistribution(labels_of(obs), std::move(probs));
}

OutcomeDistribution abl(const ForwardState& pre, const BackwardState& post,
                        const Observable& obs) {
    if (pre.dims() != obs.dims() || post.dims() != obs.dims()) {
        throw DimMismatch("abl: state and observable dims differ");
    }
    std::vector<double> weights;
    weights.reserve(obs.outcome_count());
    for (std::size_t n = 0; n < obs.outcome_count(); ++n) {
        const cx amp = inner(post.ket.amplitudes,
                             obs.projector(n).matrix * pre.ket.amplitudes);
        weights.push_back(std::norm(amp));
    }
    return normalized_weights(obs, std::move(weights));
}

OutcomeDistribution abl(const TwoStateVector& tsv_pair, const Observable& obs) {
    return abl(tsv_pair.forward, tsv_pair.backward, obs);
}

OutcomeDistribution abl_generalized(const ForwardState& ent_pre,
                                    const BackwardState& post,
                                    const Observable& obs) {
    if (ent_pre.dims().size() != 2) {
        throw DimMismatch(
            "abl_generalized: pre-selection must live on system ⊗ ancilla");
    }
    const int d = ent_pre.dims()[0];
    if (obs.dims() != std::vector<int>{d} ||
        post.dims() != std::vector<int>{d}) {
        throw DimMismatch(
            "abl_generalized: observable/post-selection must act on the "
            "system factor");
    }

    const LinearOp anc_id = LinearOp::identity({ent_pre.dims()[1]});
    const CMat post_proj =
        tensor(LinearOp::outer(post.ket), anc_id).matrix;

    std::vector<double> weights;
    weights.reserve(obs.outcome_count());
    for (std::size_t n = 0; n < obs.outcome_count(); ++n) {
        const CMat mid_proj = tensor(obs.projector(n), anc_id).matrix;
        weights.push_back(
            (post_proj * (mid_proj * ent_pre.ket.amplitudes)).squaredNorm());
    }
    return normalized_weights(obs, std::move(weights));
}

std::map<std::string, OutcomeDistribution> sequential_oracle(
    const Timeline& timeline) {
    RunResult result = enumerate(timeline);
    std::map<std::string, OutcomeDistribution> out;
    for (const MeasurementRecord& rec : result.measurements) {
        out.emplace(rec.label, rec.conditional);
    }
    return out;
}

}  // namespace tsv
