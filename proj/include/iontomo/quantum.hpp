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

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

#include "iontomo/rng.hpp"

namespace iontomo {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

/// Normalized state vector of a qubit register.
struct PureState {
    CVector amplitudes;

    explicit PureState(CVector amplitudes);

    int dim() const { return static_cast<int>(amplitudes.size()); }
};

/// Hermitian, unit-trace, positive-semidefinite operator.
struct DensityMatrix {
    CMatrix matrix;

    explicit DensityMatrix(CMatrix matrix);

    static DensityMatrix from_pure(const PureState& state);

    int dim() const { return static_cast<int>(matrix.rows()); }
};

/// Basis-change transformation applied before readout. Measuring "in basis
/// U" means reading out effects U^dagger Lambda U; the computational (Z)
/// basis corresponds to the identity.
struct BasisUnitary {
    CMatrix matrix;
    std::string label;

    BasisUnitary(CMatrix matrix, std::string label);

    int dim() const { return static_cast<int>(matrix.rows()); }
};

/// Ordered basis settings with the fraction of total shots spent on each.
struct MeasurementProtocol {
    std::vector<BasisUnitary> bases;
    std::vector<double> shot_fractions;

    MeasurementProtocol(std::vector<BasisUnitary> bases, std::vector<double> shot_fractions);

    int dim() const { return bases.front().dim(); }
    int basis_count() const { return static_cast<int>(bases.size()); }
};

/// Haar-uniform random pure state: a normalized vector of independent
/// standard complex Gaussians.
PureState haar_random_pure(int dim, Rng& rng);

double fidelity(const PureState& a, const PureState& b);
double fidelity(const PureState& a, const DensityMatrix& b);
double fidelity(const DensityMatrix& a, const PureState& b);
double fidelity(const DensityMatrix& a, const DensityMatrix& b);

/// All 3^n_qubits tensor products of per-qubit X/Y/Z basis changes, labelled
/// by letter strings ("XZ" = first qubit X, second qubit Z), with equal shot
/// fractions. The first qubit is the most significant register bit.
MeasurementProtocol pauli_bases(int n_qubits);

CMatrix kron(const CMatrix& a, const CMatrix& b);

/// Shots per basis: floor(n / bases) each, remainder given out one per
/// basis in order.
std::vector<long> allocate_shots(long total, int basis_count);

}  // namespace iontomo
