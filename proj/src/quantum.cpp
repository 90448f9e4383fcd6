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

#include "iontomo/quantum.hpp"

#include <cmath>
#include <stdexcept>

namespace iontomo {

namespace {

constexpr double kStructureTol = 1e-12;

void require_same_dim(int a, int b, const char* what) {
    if (a != b) {
        throw std::invalid_argument(std::string(what) + ": dimension mismatch (" +
                                    std::to_string(a) + " vs " + std::to_string(b) + ")");
    }
}

}  // namespace

PureState::PureState(CVector amplitudes_in) : amplitudes(std::move(amplitudes_in)) {
    if (amplitudes.size() < 1) {
        throw std::invalid_argument("PureState: empty amplitude vector");
    }
    if (std::abs(amplitudes.norm() - 1.0) > kStructureTol) {
        throw std::invalid_argument("PureState: amplitudes are not normalized");
    }
}

DensityMatrix::DensityMatrix(CMatrix matrix_in) : matrix(std::move(matrix_in)) {
    if (matrix.rows() != matrix.cols() || matrix.rows() < 1) {
        throw std::invalid_argument("DensityMatrix: matrix must be square");
    }
    if ((matrix - matrix.adjoint()).cwiseAbs().maxCoeff() > kStructureTol) {
        throw std::invalid_argument("DensityMatrix: matrix is not Hermitian");
    }
    matrix = 0.5 * (matrix + matrix.adjoint().eval());
    if (std::abs(matrix.trace().real() - 1.0) > kStructureTol) {
        throw std::invalid_argument("DensityMatrix: trace differs from one");
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(matrix, Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < -1e-10) {
        throw std::invalid_argument("DensityMatrix: matrix is not positive semidefinite");
    }
}

DensityMatrix DensityMatrix::from_pure(const PureState& state) {
    return DensityMatrix(state.amplitudes * state.amplitudes.adjoint());
}

BasisUnitary::BasisUnitary(CMatrix matrix_in, std::string label_in)
    : matrix(std::move(matrix_in)), label(std::move(label_in)) {
    if (matrix.rows() != matrix.cols() || matrix.rows() < 1) {
        throw std::invalid_argument("BasisUnitary: matrix must be square");
    }
    const CMatrix gram = matrix.adjoint() * matrix;
    const CMatrix identity = CMatrix::Identity(matrix.rows(), matrix.cols());
    if ((gram - identity).cwiseAbs().maxCoeff() > kStructureTol) {
        throw std::invalid_argument("BasisUnitary: matrix is not unitary");
    }
}

MeasurementProtocol::MeasurementProtocol(std::vector<BasisUnitary> bases_in,
                                         std::vector<double> fractions_in)
    : bases(std::move(bases_in)), shot_fractions(std::move(fractions_in)) {
    if (bases.empty() || bases.size() != shot_fractions.size()) {
        throw std::invalid_argument("MeasurementProtocol: bases and fractions must align");
    }
    double sum = 0.0;
    for (double f : shot_fractions) {
        if (!(f >= 0.0)) {
            throw std::invalid_argument("MeasurementProtocol: negative shot fraction");
        }
        sum += f;
    }
    if (std::abs(sum - 1.0) > 1e-10) {
        throw std::invalid_argument("MeasurementProtocol: shot fractions must sum to one");
    }
    for (const auto& basis : bases) {
        require_same_dim(basis.dim(), bases.front().dim(), "MeasurementProtocol");
    }
}

PureState haar_random_pure(int dim, Rng& rng) {
    if (dim < 2) {
        throw std::invalid_argument("haar_random_pure: dimension must be at least 2");
    }
    CVector v(dim);
    for (int i = 0; i < dim; ++i) {
        v(i) = Complex(rng.normal(), rng.normal());
    }
    v /= v.norm();
    return PureState(std::move(v));
}

double fidelity(const PureState& a, const PureState& b) {
    require_same_dim(a.dim(), b.dim(), "fidelity");
    return std::norm(a.amplitudes.dot(b.amplitudes));
}

double fidelity(const PureState& a, const DensityMatrix& b) {
    require_same_dim(a.dim(), b.dim(), "fidelity");
    const Complex value = a.amplitudes.dot(b.matrix * a.amplitudes);
    return value.real();
}

double fidelity(const DensityMatrix& a, const PureState& b) { return fidelity(b, a); }

namespace {

// PSD square root with eigenvalues at noise level clamped to exact zero, so
// rank-deficient inputs do not grow sqrt(noise) spurious directions.
CMatrix sqrt_psd(const CMatrix& m) {
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(m);
    Eigen::VectorXd eigs = solver.eigenvalues().cwiseMax(0.0);
    const double floor = 1e-14 * eigs.maxCoeff();
    for (int i = 0; i < eigs.size(); ++i) {
        if (eigs(i) < floor) {
            eigs(i) = 0.0;
        }
    }
    return solver.eigenvectors() *
           eigs.cwiseSqrt().asDiagonal().toDenseMatrix().cast<Complex>() *
           solver.eigenvectors().adjoint();
}

}  // namespace

double fidelity(const DensityMatrix& a, const DensityMatrix& b) {
    require_same_dim(a.dim(), b.dim(), "fidelity");
    // (tr sqrt(sqrt(a) b sqrt(a)))^2 = (sum of singular values of
    // sqrt(a) sqrt(b))^2; the SVD route keeps near-zero terms at machine
    // accuracy.
    const CMatrix product = sqrt_psd(a.matrix) * sqrt_psd(b.matrix);
    const Eigen::JacobiSVD<CMatrix> svd(product);
    const double root_sum = svd.singularValues().sum();
    return root_sum * root_sum;
}

MeasurementProtocol pauli_bases(int n_qubits) {
    if (n_qubits < 1) {
        throw std::invalid_argument("pauli_bases: need at least one qubit");
    }
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    CMatrix to_z = CMatrix::Identity(2, 2);
    CMatrix to_x(2, 2);
    to_x << inv_sqrt2, inv_sqrt2, inv_sqrt2, -inv_sqrt2;
    CMatrix to_y(2, 2);
    to_y << inv_sqrt2, Complex(0.0, -inv_sqrt2), inv_sqrt2, Complex(0.0, inv_sqrt2);

    const CMatrix single[3] = {to_x, to_y, to_z};
    const char letters[3] = {'X', 'Y', 'Z'};

    int count = 1;
    for (int q = 0; q < n_qubits; ++q) {
        count *= 3;
    }
    std::vector<BasisUnitary> bases;
    bases.reserve(count);
    for (int index = 0; index < count; ++index) {
        CMatrix u = CMatrix::Identity(1, 1);
        std::string label;
        int rem = index;
        int divisor = count / 3;
        for (int q = 0; q < n_qubits; ++q) {
            const int letter = rem / divisor;
            rem %= divisor;
            divisor /= 3;
            u = kron(u, single[letter]);
            label.push_back(letters[letter]);
        }
        bases.emplace_back(std::move(u), std::move(label));
    }
    return MeasurementProtocol(std::move(bases), std::vector<double>(count, 1.0 / count));
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i) {
        for (int j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

std::vector<long> allocate_shots(long total, int basis_count) {
    if (total < 0 || basis_count < 1) {
        throw std::invalid_argument("allocate_shots: bad arguments");
    }
    std::vector<long> shots(basis_count, total / basis_count);
    const long remainder = total % basis_count;
    for (long i = 0; i < remainder; ++i) {
        ++shots[i];
    }
    return shots;
}

}  // namespace iontomo
