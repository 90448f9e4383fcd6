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
#include <set>

#include "doctest.h"
#include "iontomo/stats.hpp"

using namespace iontomo;

TEST_CASE("haar states are normalized") {
    Rng rng(11);
    for (int i = 0; i < 50; ++i) {
        const PureState state = haar_random_pure(4, rng);
        CHECK(std::abs(state.amplitudes.norm() - 1.0) <= 1e-12);
    }
    CHECK_THROWS_AS(haar_random_pure(1, rng), std::invalid_argument);
}

TEST_CASE("haar sampling has no preferred Bloch direction") {
    Rng rng(2024);
    const long samples = 100000;
    double x = 0.0, y = 0.0, z = 0.0;
    for (long i = 0; i < samples; ++i) {
        const PureState state = haar_random_pure(2, rng);
        const Complex c0 = state.amplitudes(0);
        const Complex c1 = state.amplitudes(1);
        const Complex cross = std::conj(c0) * c1;
        x += 2.0 * cross.real();
        y += 2.0 * cross.imag();
        z += std::norm(c0) - std::norm(c1);
    }
    const double n = static_cast<double>(samples);
    const double norm = std::sqrt(x * x + y * y + z * z) / n;
    CHECK(norm < 0.02);
}

TEST_CASE("haar overlap marginal is Beta(1, s-1)") {
    Rng rng(77);
    const int dim = 4;
    const MeasurementProtocol protocol = pauli_bases(2);
    const CMatrix fixed_unitary = protocol.bases[1].matrix;  // nontrivial rotation
    std::vector<double> overlaps;
    overlaps.reserve(100000);
    for (int i = 0; i < 100000; ++i) {
        const PureState state = haar_random_pure(dim, rng);
        overlaps.push_back(std::norm((fixed_unitary * state.amplitudes)(0)));
    }
    const auto ks = ks_test(overlaps, [dim](double v) {
        if (v <= 0.0) return 0.0;
        if (v >= 1.0) return 1.0;
        return 1.0 - std::pow(1.0 - v, dim - 1);
    });
    CHECK(ks.p_value > 0.01);
}

TEST_CASE("fidelity special values") {
    CVector zero(2), one(2), plus(2);
    zero << 1.0, 0.0;
    one << 0.0, 1.0;
    plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    const PureState s_zero(zero), s_one(one), s_plus(plus);

    CHECK(fidelity(s_zero, s_zero) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(fidelity(s_zero, s_one) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(fidelity(s_zero, s_plus) == doctest::Approx(0.5).epsilon(1e-13));

    const DensityMatrix mixed(0.5 * CMatrix::Identity(2, 2));
    CHECK(fidelity(s_zero, mixed) == doctest::Approx(0.5).epsilon(1e-13));
    Rng rng(1);
    CHECK_THROWS_AS(fidelity(s_zero, haar_random_pure(4, rng)), std::invalid_argument);
}

TEST_CASE("fidelity symmetry and joint unitary invariance") {
    Rng rng(5150);
    for (int trial = 0; trial < 10; ++trial) {
        const PureState a = haar_random_pure(4, rng);
        const PureState b = haar_random_pure(4, rng);
        const PureState c = haar_random_pure(4, rng);

        // Mixed pair from rank-2 blends.
        const DensityMatrix rho_a(DensityMatrix(
            0.7 * a.amplitudes * a.amplitudes.adjoint() +
            0.3 * b.amplitudes * b.amplitudes.adjoint()));
        const DensityMatrix rho_b(DensityMatrix(
            0.4 * b.amplitudes * b.amplitudes.adjoint() +
            0.6 * c.amplitudes * c.amplitudes.adjoint()));

        const double forward = fidelity(rho_a, rho_b);
        const double backward = fidelity(rho_b, rho_a);
        CHECK(forward == doctest::Approx(backward).epsilon(1e-10));

        // Pure-pure and pure-mixed routes agree on pure inputs.
        const DensityMatrix rho_c = DensityMatrix::from_pure(c);
        CHECK(fidelity(a, rho_c) == doctest::Approx(fidelity(a, c)).epsilon(1e-12));
        CHECK(fidelity(rho_c, DensityMatrix::from_pure(a)) ==
              doctest::Approx(fidelity(a, c)).epsilon(1e-10));

        const MeasurementProtocol protocol = pauli_bases(2);
        const CMatrix u = protocol.bases[3].matrix;
        const DensityMatrix rot_a(u * rho_a.matrix * u.adjoint());
        const DensityMatrix rot_b(u * rho_b.matrix * u.adjoint());
        CHECK(fidelity(rot_a, rot_b) == doctest::Approx(forward).epsilon(1e-10));
    }
}

TEST_CASE("pauli protocol structure") {
    const MeasurementProtocol one_qubit = pauli_bases(1);
    CHECK(one_qubit.basis_count() == 3);
    CHECK(one_qubit.bases[2].label == "Z");
    CHECK((one_qubit.bases[2].matrix - CMatrix::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-15);

    // The X rotation maps (|0> + |1>)/sqrt(2) onto |0> up to phase.
    CVector plus(2);
    plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    const CVector mapped = one_qubit.bases[0].matrix * plus;
    CHECK(std::abs(mapped(0)) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(std::abs(mapped(1)) == doctest::Approx(0.0).epsilon(1e-13));

    const MeasurementProtocol two_qubit = pauli_bases(2);
    CHECK(two_qubit.basis_count() == 9);
    std::set<std::string> labels;
    double fraction_sum = 0.0;
    for (int b = 0; b < 9; ++b) {
        CHECK(two_qubit.bases[b].dim() == 4);  // unitarity enforced on construction
        labels.insert(two_qubit.bases[b].label);
        fraction_sum += two_qubit.shot_fractions[b];
    }
    CHECK(labels.size() == 9);
    CHECK(labels.count("XY") == 1);
    CHECK(fraction_sum == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("type validation catches malformed inputs") {
    CVector unnormalized(2);
    unnormalized << 1.0, 1.0;
    CHECK_THROWS_AS((PureState(unnormalized)), std::invalid_argument);

    CMatrix not_hermitian(2, 2);
    not_hermitian << 1.0, Complex(0.0, 0.5), Complex(0.0, 0.5), 0.0;
    CHECK_THROWS_AS((DensityMatrix(not_hermitian)), std::invalid_argument);

    CMatrix wrong_trace = 2.0 * CMatrix::Identity(2, 2);
    CHECK_THROWS_AS((DensityMatrix(wrong_trace)), std::invalid_argument);

    CMatrix indefinite(2, 2);
    indefinite << 1.5, 0.0, 0.0, -0.5;
    CHECK_THROWS_AS((DensityMatrix(indefinite)), std::invalid_argument);

    CMatrix shrink = 0.5 * CMatrix::Identity(2, 2);
    CHECK_THROWS_AS(BasisUnitary(shrink, "bad"), std::invalid_argument);
}

TEST_CASE("kron layout") {
    CMatrix a(2, 2), b(2, 2);
    a << 1.0, 2.0, 3.0, 4.0;
    b << 0.0, 1.0, 1.0, 0.0;
    const CMatrix k = kron(a, b);
    CHECK(k.rows() == 4);
    CHECK(k(0, 1).real() == doctest::Approx(1.0));
    CHECK(k(0, 3).real() == doctest::Approx(2.0));
    CHECK(k(3, 0).real() == doctest::Approx(3.0));
}

TEST_CASE("shot allocation") {
    const std::vector<long> shots = allocate_shots(1000000, 9);
    long total = 0;
    for (long s : shots) {
        total += s;
    }
    CHECK(total == 1000000);
    CHECK(shots[0] == 111112);
    CHECK(shots[8] == 111111);
    CHECK(allocate_shots(4, 9)[3] == 1);
    CHECK(allocate_shots(4, 9)[4] == 0);
}
