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

#pragma once

#include <cstdint>
#include <vector>

#include "iontomo/povm.hpp"

namespace iontomo {

/// Observed outcome tallies for one basis setting. Counts are stored as
/// reals so that exact n -> infinity surrogates (count = shots * probability)
/// flow through the same code paths as sampled integer data.
struct BasisRecord {
    std::string basis_label;
    long shots = 0;
    std::vector<std::pair<OutcomeLabel, double>> counts;
};

/// A full measurement run: per-basis outcome tallies plus bookkeeping.
struct Dataset {
    std::vector<BasisRecord> records;
    MeasurementModel model = MeasurementModel::ideal_projector;
    std::uint64_t seed = 0;
    double total_shots = 0.0;
    int threshold_k0 = 0;  // 0 when not applicable
};

/// Born probabilities tr(E * rho) for every effect, tiny negatives clamped.
std::vector<double> outcome_probabilities(const DensityMatrix& state, const Povm& povm);

std::vector<long> sample_multinomial(const std::vector<double>& probs, long shots, Rng& rng);

/// Two-stage physical sampler: draw a computational-basis register outcome
/// from the rotated state, then per qubit draw a photon count from the
/// bright channel (bit 0) or the dark channel with background and decay
/// (bit 1). Counts at or above `fold_max_count` land in that top bin.
BasisRecord simulate_physical(const PureState& state, const BasisUnitary& basis,
                              const ReadoutPhysics& phys, long shots, int fold_max_count,
                              Rng& rng);

/// Multinomial sampling over precomputed per-basis Born probabilities.
Dataset sample_dataset(const PureState& state, const std::vector<BasisPovm>& povms,
                       const std::vector<long>& shots_per_basis, Rng& rng);

/// Synthetic measurement run for a protocol and model. Threshold data are
/// produced by sampling the photon-count model and discriminating at k0, so
/// a threshold run with the same seed is exactly the reduction of the
/// photon-count run.
Dataset run_experiment(const PureState& state, const MeasurementProtocol& protocol,
                       const ReadoutPhysics& phys, long total_shots, MeasurementModel model,
                       int k0, double tail_tol, const Rng& rng);

/// Discriminate photon-count outcomes at k0 (count >= k0 reads bright = 0)
/// and aggregate into binary-outcome records.
Dataset reduce_to_threshold(const Dataset& dataset, int k0);

}  // namespace iontomo
