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

#include "iontomo/povm.hpp"

#include <stdexcept>
#include <string>

namespace iontomo {

namespace {

constexpr double kCompletenessTol = 1e-10;
constexpr double kPsdTol = -1e-12;

}  // namespace

const char* model_name(MeasurementModel model) {
    switch (model) {
        case MeasurementModel::ideal_projector:
            return "ideal";
        case MeasurementModel::threshold:
            return "threshold";
        case MeasurementModel::photon_count:
            return "photon_count";
    }
    return "unknown";
}

std::string label_to_string(const OutcomeLabel& label) {
    std::string out;
    for (std::size_t i = 0; i < label.size(); ++i) {
        if (i > 0) {
            out.push_back(':');
        }
        out += std::to_string(label[i]);
    }
    return out;
}

Povm::Povm(std::vector<Effect> effects_in, MeasurementModel model_in)
    : effects(std::move(effects_in)), dim(0), model(model_in) {
    if (effects.empty()) {
        throw std::invalid_argument("Povm: no effects");
    }
    dim = static_cast<int>(effects.front().matrix.rows());
    CMatrix sum = CMatrix::Zero(dim, dim);
    for (const auto& effect : effects) {
        if (effect.matrix.rows() != dim || effect.matrix.cols() != dim) {
            throw std::invalid_argument("Povm: effect dimensions disagree");
        }
        if ((effect.matrix - effect.matrix.adjoint()).cwiseAbs().maxCoeff() > 1e-12) {
            throw std::invalid_argument("Povm: effect is not Hermitian");
        }
        Eigen::SelfAdjointEigenSolver<CMatrix> solver(effect.matrix, Eigen::EigenvaluesOnly);
        if (solver.eigenvalues().minCoeff() < kPsdTol) {
            throw std::invalid_argument("Povm: effect '" + label_to_string(effect.label) +
                                        "' is not positive semidefinite");
        }
        sum += effect.matrix;
    }
    if ((sum - CMatrix::Identity(dim, dim)).cwiseAbs().maxCoeff() > kCompletenessTol) {
        throw std::invalid_argument("Povm: effects do not sum to the identity");
    }
}

Povm threshold_povm(double eps10, double eps01) {
    if (!(eps10 >= 0.0 && eps10 < 1.0 && eps01 >= 0.0 && eps01 < 1.0)) {
        throw std::invalid_argument("threshold_povm: error rates must lie in [0, 1)");
    }
    CMatrix bright = CMatrix::Zero(2, 2);
    bright(0, 0) = 1.0 - eps10;
    bright(1, 1) = eps01;
    CMatrix dark = CMatrix::Zero(2, 2);
    dark(0, 0) = eps10;
    dark(1, 1) = 1.0 - eps01;
    std::vector<Effect> effects;
    effects.push_back({std::move(bright), {0}});
    effects.push_back({std::move(dark), {1}});
    return Povm(std::move(effects), MeasurementModel::threshold);
}

Povm photon_count_povm(const CountDistribution& bright, const CountDistribution& dark) {
    const int max_count = std::max(bright.max_count(), dark.max_count());
    std::vector<Effect> effects;
    effects.reserve(max_count + 1);
    for (int k = 0; k <= max_count; ++k) {
        CMatrix effect = CMatrix::Zero(2, 2);
        effect(0, 0) = k <= bright.max_count() ? bright.pmf[k] : 0.0;
        effect(1, 1) = k <= dark.max_count() ? dark.pmf[k] : 0.0;
        effects.push_back({std::move(effect), {k}});
    }
    return Povm(std::move(effects), MeasurementModel::photon_count);
}

Povm ideal_projector_povm() {
    CMatrix p0 = CMatrix::Zero(2, 2);
    p0(0, 0) = 1.0;
    CMatrix p1 = CMatrix::Zero(2, 2);
    p1(1, 1) = 1.0;
    std::vector<Effect> effects;
    effects.push_back({std::move(p0), {0}});
    effects.push_back({std::move(p1), {1}});
    return Povm(std::move(effects), MeasurementModel::ideal_projector);
}

Povm tensor_povm(const std::vector<Povm>& parts) {
    if (parts.empty()) {
        throw std::invalid_argument("tensor_povm: no parts");
    }
    std::vector<Effect> effects;
    effects.push_back({CMatrix::Identity(1, 1), {}});
    for (const auto& part : parts) {
        std::vector<Effect> next;
        next.reserve(effects.size() * part.effects.size());
        for (const auto& head : effects) {
            for (const auto& tail : part.effects) {
                OutcomeLabel label = head.label;
                label.insert(label.end(), tail.label.begin(), tail.label.end());
                next.push_back({kron(head.matrix, tail.matrix), std::move(label)});
            }
        }
        effects = std::move(next);
    }
    return Povm(std::move(effects), parts.front().model);
}

Povm rotate_povm(const BasisUnitary& basis, const Povm& povm) {
    if (basis.dim() != povm.dim) {
        throw std::invalid_argument("rotate_povm: dimension mismatch");
    }
    std::vector<Effect> effects;
    effects.reserve(povm.effects.size());
    for (const auto& effect : povm.effects) {
        effects.push_back({basis.matrix.adjoint() * effect.matrix * basis.matrix, effect.label});
    }
    return Povm(std::move(effects), povm.model);
}

std::vector<BasisPovm> protocol_povms(const MeasurementProtocol& protocol, const Povm& model) {
    std::vector<BasisPovm> result;
    result.reserve(protocol.bases.size());
    for (const auto& basis : protocol.bases) {
        result.push_back({basis, rotate_povm(basis, model)});
    }
    return result;
}

Povm model_povm(MeasurementModel model, const ReadoutPhysics& phys, int k0, double tail_tol) {
    switch (model) {
        case MeasurementModel::ideal_projector:
            return ideal_projector_povm();
        case MeasurementModel::threshold: {
            const int threshold = k0 > 0 ? k0 : optimal_threshold(phys, tail_tol);
            const ReadoutErrors errors = readout_errors(phys, threshold);
            return threshold_povm(errors.eps10, errors.eps01);
        }
        case MeasurementModel::photon_count:
            return photon_count_povm(truncated_bright(phys, tail_tol),
                                     truncated_dark(phys, tail_tol));
    }
    throw std::invalid_argument("model_povm: unknown model");
}

Povm register_povm(MeasurementModel model, const ReadoutPhysics& phys, int k0, double tail_tol,
                   int n_qubits) {
    if (n_qubits < 1) {
        throw std::invalid_argument("register_povm: need at least one qubit");
    }
    const Povm single = model_povm(model, phys, k0, tail_tol);
    if (n_qubits == 1) {
        return single;
    }
    return tensor_povm(std::vector<Povm>(n_qubits, single));
}

}  // namespace iontomo
