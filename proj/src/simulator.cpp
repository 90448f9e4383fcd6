// Copyright 2026 The iontomo authors
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

#include "iontomo/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace iontomo {

namespace {

int register_qubits(int dim) {
    int n = 0;
    int d = 1;
    while (d < dim) {
        d *= 2;
        ++n;
    }
    if (d != dim) {
        throw std::invalid_argument("simulator: dimension is not a power of two");
    }
    return n;
}

// Index of the sampled bin by inversion of the cumulative distribution.
int sample_index(const std::vector<double>& cumulative, double u) {
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    int index = static_cast<int>(it - cumulative.begin());
    if (index >= static_cast<int>(cumulative.size())) {
        index = static_cast<int>(cumulative.size()) - 1;
    }
    return index;
}

std::vector<std::pair<OutcomeLabel, double>> to_sorted_counts(
    std::map<OutcomeLabel, double>&& tally) {
    std::vector<std::pair<OutcomeLabel, double>> counts;
    counts.reserve(tally.size());
    for (auto& entry : tally) {
        counts.emplace_back(entry.first, entry.second);
    }
    return counts;
}

}  // namespace

std::vector<double> outcome_probabilities(const DensityMatrix& state, const Povm& povm) {
    if (state.dim() != povm.dim) {
        throw std::invalid_argument("outcome_probabilities: dimension mismatch");
    }
    std::vector<double> probs(povm.effects.size());
    for (std::size_t i = 0; i < povm.effects.size(); ++i) {
        double p = (povm.effects[i].matrix * state.matrix).trace().real();
        if (p < 0.0) {
            if (p < -1e-12) {
                throw std::domain_error("outcome_probabilities: probability below -1e-12");
            }
            p = 0.0;
        }
        probs[i] = p;
    }
    return probs;
}

std::vector<long> sample_multinomial(const std::vector<double>& probs, long shots, Rng& rng) {
    if (shots < 0) {
        throw std::invalid_argument("sample_multinomial: negative shot count");
    }
    std::vector<double> cumulative(probs.size());
    double running = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        running += probs[i];
        cumulative[i] = running;
    }
    std::vector<long> counts(probs.size(), 0);
    for (long shot = 0; shot < shots; ++shot) {
        ++counts[sample_index(cumulative, rng.uniform() * running)];
    }
    return counts;
}

BasisRecord simulate_physical(const PureState& state, const BasisUnitary& basis,
                              const ReadoutPhysics& phys, long shots, int fold_max_count,
                              Rng& rng) {
    if (state.dim() != basis.dim()) {
        throw std::invalid_argument("simulate_physical: dimension mismatch");
    }
    const int n_qubits = register_qubits(state.dim());
    const CVector rotated = basis.matrix * state.amplitudes;
    std::vector<double> cumulative(state.dim());
    double running = 0.0;
    for (int z = 0; z < state.dim(); ++z) {
        running += std::norm(rotated(z));
        cumulative[z] = running;
    }

    const double bright_mean = phys.bright_rate * phys.exposure;
    const double background_mean = phys.dark_rate * phys.exposure;
    const double survive = std::exp(-phys.decay_rate * phys.exposure);

    std::map<OutcomeLabel, double> tally;
    OutcomeLabel outcome(n_qubits);
    for (long shot = 0; shot < shots; ++shot) {
        const int z = sample_index(cumulative, rng.uniform() * running);
        for (int q = 0; q < n_qubits; ++q) {
            const int bit = (z >> (n_qubits - 1 - q)) & 1;
            long count = 0;
            if (bit == 0) {
                count = rng.poisson(bright_mean);
            } else {
                count = rng.poisson(background_mean);
                if (rng.uniform() >= survive) {
                    // Decay time conditioned on decaying within the exposure.
                    const double u = rng.uniform();
                    const double decay_time =
                        -std::log1p(-u * (1.0 - survive)) / phys.decay_rate;
                    count += rng.poisson(phys.bright_rate * (phys.exposure - decay_time));
                }
            }
            outcome[q] = static_cast<int>(std::min<long>(count, fold_max_count));
        }
        tally[outcome] += 1.0;
    }

    BasisRecord record;
    record.basis_label = basis.label;
    record.shots = shots;
    record.counts = to_sorted_counts(std::move(tally));
    return record;
}

Dataset sample_dataset(const PureState& state, const std::vector<BasisPovm>& povms,
                       const std::vector<long>& shots_per_basis, Rng& rng) {
    if (povms.size() != shots_per_basis.size()) {
        throw std::invalid_argument("sample_dataset: shots/basis mismatch");
    }
    const DensityMatrix rho = DensityMatrix::from_pure(state);
    Dataset dataset;
    dataset.model = povms.front().povm.model;
    dataset.seed = rng.seed();
    for (std::size_t b = 0; b < povms.size(); ++b) {
        const std::vector<double> probs = outcome_probabilities(rho, povms[b].povm);
        Rng stream = rng.child(b);
        const std::vector<long> counts = sample_multinomial(probs, shots_per_basis[b], stream);
        BasisRecord record;
        record.basis_label = povms[b].basis.label;
        record.shots = shots_per_basis[b];
        for (std::size_t i = 0; i < counts.size(); ++i) {
            if (counts[i] > 0) {
                record.counts.emplace_back(povms[b].povm.effects[i].label,
                                           static_cast<double>(counts[i]));
            }
        }
        dataset.total_shots += static_cast<double>(shots_per_basis[b]);
        dataset.records.push_back(std::move(record));
    }
    return dataset;
}

Dataset run_experiment(const PureState& state, const MeasurementProtocol& protocol,
                       const ReadoutPhysics& phys, long total_shots, MeasurementModel model,
                       int k0, double tail_tol, const Rng& rng) {
    const int n_qubits = register_qubits(state.dim());
    const std::vector<long> shots = allocate_shots(total_shots, protocol.basis_count());
    Rng stream = rng;

    if (model == MeasurementModel::ideal_projector) {
        const Povm ideal = register_povm(model, phys, 0, tail_tol, n_qubits);
        return sample_dataset(state, protocol_povms(protocol, ideal), shots, stream);
    }

    const Povm counting =
        register_povm(MeasurementModel::photon_count, phys, 0, tail_tol, n_qubits);
    Dataset raw = sample_dataset(state, protocol_povms(protocol, counting), shots, stream);
    if (model == MeasurementModel::photon_count) {
        return raw;
    }
    const int threshold = k0 > 0 ? k0 : optimal_threshold(phys, tail_tol);
    return reduce_to_threshold(raw, threshold);
}

Dataset reduce_to_threshold(const Dataset& dataset, int k0) {
    if (dataset.model != MeasurementModel::photon_count) {
        throw std::invalid_argument("reduce_to_threshold: dataset is not photon-count data");
    }
    if (k0 < 1) {
        throw std::invalid_argument("reduce_to_threshold: threshold must be at least 1");
    }
    Dataset reduced;
    reduced.model = MeasurementModel::threshold;
    reduced.seed = dataset.seed;
    reduced.total_shots = dataset.total_shots;
    reduced.threshold_k0 = k0;
    for (const auto& record : dataset.records) {
        std::map<OutcomeLabel, double> tally;
        OutcomeLabel binary;
        for (const auto& [label, count] : record.counts) {
            binary.resize(label.size());
            for (std::size_t q = 0; q < label.size(); ++q) {
                binary[q] = label[q] >= k0 ? 0 : 1;
            }
            tally[binary] += count;
        }
        BasisRecord out;
        out.basis_label = record.basis_label;
        out.shots = record.shots;
        out.counts = to_sorted_counts(std::move(tally));
        reduced.records.push_back(std::move(out));
    }
    return reduced;
}

}  // namespace iontomo
