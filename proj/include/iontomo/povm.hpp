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

#include <vector>

#include "iontomo/photon_stats.hpp"
#include "iontomo/quantum.hpp"

namespace iontomo {

/// Which readout model a POVM (or a dataset) belongs to.
enum class MeasurementModel { ideal_projector, threshold, photon_count };

const char* model_name(MeasurementModel model);

/// Outcome identifier: one integer per qubit. Photon-count outcomes carry
/// the registered count, threshold and projector outcomes carry the binary
/// readout (0 = bright, 1 = dark).
using OutcomeLabel = std::vector<int>;

std::string label_to_string(const OutcomeLabel& label);

/// One measurement operator with its outcome label.
struct Effect {
    CMatrix matrix;
    OutcomeLabel label;
};

/// Ordered set of labelled effects summing to the identity.
struct Povm {
    std::vector<Effect> effects;
    int dim;
    MeasurementModel model;

    Povm(std::vector<Effect> effects, MeasurementModel model);

    int size() const { return static_cast<int>(effects.size()); }
};

/// Two-outcome single-qubit POVM of threshold discrimination with the given
/// misclassification rates. Outcome 0 registers "bright", outcome 1 "dark".
Povm threshold_povm(double eps10, double eps01);

/// Per-count single-qubit POVM: one effect per photon number, weighting the
/// bright and dark projectors by the respective count probabilities. The two
/// distributions are aligned on a common support first (the shorter one keeps
/// its folded tail in place).
Povm photon_count_povm(const CountDistribution& bright, const CountDistribution& dark);

/// Noise-free single-qubit computational-basis projectors.
Povm ideal_projector_povm();

/// Tensor product of per-qubit POVMs, labels concatenated per qubit. The
/// first entry is the most significant register bit.
Povm tensor_povm(const std::vector<Povm>& parts);

/// Effective POVM after a basis change: every effect maps to U^dagger * E * U.
Povm rotate_povm(const BasisUnitary& basis, const Povm& povm);

/// One basis setting together with its effective (rotated) POVM.
struct BasisPovm {
    BasisUnitary basis;
    Povm povm;
};

/// The per-basis effective POVMs of a whole protocol.
std::vector<BasisPovm> protocol_povms(const MeasurementProtocol& protocol, const Povm& model);

/// Single-qubit POVM for a measurement model, derived from the physics.
/// k0 is only used by the threshold model; pass 0 to pick the optimal one.
Povm model_povm(MeasurementModel model, const ReadoutPhysics& phys, int k0, double tail_tol);

/// The model POVM extended to a register of identically read-out qubits.
Povm register_povm(MeasurementModel model, const ReadoutPhysics& phys, int k0, double tail_tol,
                   int n_qubits);

}  // namespace iontomo
