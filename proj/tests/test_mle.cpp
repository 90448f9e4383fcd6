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

#include "iontomo/mle.hpp"

#include <cmath>

#include "doctest.h"
#include "iontomo/stats.hpp"

using namespace iontomo;

namespace {

const ReadoutPhysics kBaseline(1.0, 0.05, 3.0, 0.05);

PureState computational_zero(int dim) {
    CVector v = CVector::Zero(dim);
    v(0) = 1.0;
    return PureState(std::move(v));
}

// Exact-probability dataset: counts = shots * p, the infinite-sample
// surrogate.
Dataset exact_dataset(const PureState& state, const std::vector<BasisPovm>& povms,
                      double shots_per_basis) {
    const DensityMatrix rho = DensityMatrix::from_pure(state);
    Dataset dataset;
    dataset.model = povms.front().povm.model;
    for (const auto& entry : povms) {
        const auto probs = outcome_probabilities(rho, entry.povm);
        BasisRecord record;
        record.basis_label = entry.basis.label;
        record.shots = static_cast<long>(shots_per_basis);
        for (std::size_t i = 0; i < probs.size(); ++i) {
            if (probs[i] > 0.0) {
                record.counts.emplace_back(entry.povm.effects[i].label,
                                           shots_per_basis * probs[i]);
            }
        }
        dataset.total_shots += shots_per_basis;
        dataset.records.push_back(std::move(record));
    }
    return dataset;
}

}  // namespace

TEST_CASE("binary response inversion") {
    CHECK(invert_binary_response(0.02, 0.05, 0.02) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(invert_binary_response(0.95, 0.05, 0.02) == doctest::Approx(1.0).epsilon(1e-14));
    for (double p0 : {0.0, 0.3, 1.0}) {
        const double eps10 = 0.07, eps01 = 0.031;
        const double distorted = (1.0 - eps10) * p0 + eps01 * (1.0 - p0);
        CHECK(invert_binary_response(distorted, eps10, eps01) ==
              doctest::Approx(p0).epsilon(1e-12));
    }
    CHECK(invert_binary_response(-0.2, 0.05, 0.02) == 0.0);  // clamped
    CHECK(invert_binary_response(1.2, 0.05, 0.02) == 1.0);   // clamped
    CHECK_THROWS_AS(invert_binary_response(0.5, 0.6, 0.4), std::invalid_argument);
}

TEST_CASE("log likelihood limits and linearity") {
    const MeasurementProtocol protocol = pauli_bases(2);
    const Povm ideal = register_povm(MeasurementModel::ideal_projector, kBaseline, 0, 1e-12, 2);
    const auto povms = protocol_povms(protocol, ideal);
    const PureState zero_state = computational_zero(4);
    const DensityMatrix rho = DensityMatrix::from_pure(zero_state);

    Dataset certain;
    certain.model = MeasurementModel::ideal_projector;
    certain.total_shots = 1000;
    BasisRecord record;
    record.basis_label = "ZZ";
    record.shots = 1000;
    record.counts = {{{0, 0}, 1000.0}};
    certain.records.push_back(record);
    CHECK(log_likelihood(certain, povms, rho) == doctest::Approx(0.0).epsilon(1e-14));

    // A positive count on an impossible outcome is a distinguished -inf.
    certain.records[0].counts.push_back({{1, 1}, 2.0});
    CHECK(log_likelihood(certain, povms, rho) == -std::numeric_limits<double>::infinity());

    Rng rng(8080);
    const PureState state = haar_random_pure(4, rng);
    Dataset sampled = run_experiment(state, protocol, kBaseline, 90000,
                                     MeasurementModel::photon_count, 0, 1e-12, Rng(5));
    const Povm counting = register_povm(MeasurementModel::photon_count, kBaseline, 0, 1e-12, 2);
    const auto counting_povms = protocol_povms(protocol, counting);
    const double single = log_likelihood(sampled, counting_povms, rho);
    for (auto& basis_record : sampled.records) {
        for (auto& [label, count] : basis_record.counts) {
            count *= 2.0;
        }
    }
    const double doubled = log_likelihood(sampled, counting_povms, rho);
    CHECK(doubled == doctest::Approx(2.0 * single).epsilon(1e-12));
}

TEST_CASE("truth dominates perturbed states on its own data") {
    Rng rng(1234);
    const PureState truth = haar_random_pure(4, rng);
    const MeasurementProtocol protocol = pauli_bases(2);
    const Povm counting = register_povm(MeasurementModel::photon_count, kBaseline, 0, 1e-12, 2);
    const auto povms = protocol_povms(protocol, counting);
    const Dataset data = run_experiment(truth, protocol, kBaseline, 1000000,
                                        MeasurementModel::photon_count, 0, 1e-12, Rng(99));

    const double truth_loglik = log_likelihood(data, povms, DensityMatrix::from_pure(truth));
    int wins = 0;
    Rng pert_rng(4321);
    for (int trial = 0; trial < 100; ++trial) {
        CVector noise(4);
        for (int i = 0; i < 4; ++i) {
            noise(i) = Complex(pert_rng.normal(), pert_rng.normal());
        }
        noise -= truth.amplitudes.dot(noise) * truth.amplitudes;
        CVector perturbed = truth.amplitudes + 0.02 * noise / noise.norm();
        perturbed /= perturbed.norm();
        const double value =
            log_likelihood(data, povms, DensityMatrix::from_pure(PureState(perturbed)));
        if (truth_loglik >= value) {
            ++wins;
        }
    }
    CHECK(wins >= 99);
}

TEST_CASE("noise-free fixed point recovers the truth at both ranks") {
    const MeasurementProtocol protocol = pauli_bases(2);
    const Povm ideal = register_povm(MeasurementModel::ideal_projector, kBaseline, 0, 1e-12, 2);
    const auto povms = protocol_povms(protocol, ideal);
    const PureState truth = computational_zero(4);
    const Dataset data = exact_dataset(truth, povms, 1e8 / 9.0);

    for (int rank : {1, 0}) {
        MleOptions options;
        options.rank = rank;
        const ReconstructionResult result = reconstruct(data, povms, options, &truth);
        CHECK(result.converged);
        CHECK(*result.fidelity >= 1.0 - 1e-8);
        if (rank == 0) {
            CHECK(result.rank_deficient);  // pure truth cannot support full rank
        }
    }
}

TEST_CASE("likelihood trace is monotone and gauge transformations are inert") {
    Rng rng(777);
    const PureState truth = haar_random_pure(4, rng);
    const MeasurementProtocol protocol = pauli_bases(2);

    for (auto model : {MeasurementModel::photon_count, MeasurementModel::threshold}) {
        const Povm povm = register_povm(model, kBaseline, 0, 1e-12, 2);
        const auto povms = protocol_povms(protocol, povm);
        const Dataset data =
            run_experiment(truth, protocol, kBaseline, 200000, model, 0, 1e-12, Rng(11));
        for (int rank : {1, 0}) {
            MleOptions options;
            options.rank = rank;
            const ReconstructionResult result = reconstruct(data, povms, options, &truth);
            CHECK(result.converged);
            REQUIRE(result.loglik_trace.size() >= 2);
            for (std::size_t i = 1; i < result.loglik_trace.size(); ++i) {
                CHECK(result.loglik_trace[i] >= result.loglik_trace[i - 1]);
            }
        }

        // Right-multiplying the root by a unitary changes neither the state
        // nor the likelihood.
        CMatrix root(4, 2);
        root.setZero();
        root(0, 0) = std::sqrt(0.7);
        root(1, 1) = std::sqrt(0.3);
        CMatrix rotation(2, 2);
        const double angle = 0.83;
        rotation << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
        const RootState plain(root);
        const RootState turned(root * rotation.cast<Complex>());
        CHECK((plain.to_density().matrix - turned.to_density().matrix).cwiseAbs().maxCoeff() <=
              1e-12);
        CHECK(log_likelihood(data, povms, plain.to_density()) ==
              doctest::Approx(log_likelihood(data, povms, turned.to_density())).epsilon(1e-10));
    }
}

TEST_CASE("matched reconstruction error shrinks like one over n") {
    const MeasurementProtocol protocol = pauli_bases(2);
    const Povm counting = register_povm(MeasurementModel::photon_count, kBaseline, 0, 1e-12, 2);
    const auto povms = protocol_povms(protocol, counting);

    Rng rng(31415);
    std::vector<double> small_loss, large_loss;
    MleOptions options;
    options.rank = 1;
    for (int i = 0; i < 12; ++i) {
        Rng stream = rng.child(i);
        const PureState truth = haar_random_pure(4, stream);
        const Dataset small = run_experiment(truth, protocol, kBaseline, 100000,
                                             MeasurementModel::photon_count, 0, 1e-12,
                                             rng.child(1000 + i));
        const Dataset large = run_experiment(truth, protocol, kBaseline, 1000000,
                                             MeasurementModel::photon_count, 0, 1e-12,
                                             rng.child(2000 + i));
        small_loss.push_back(1.0 - *reconstruct(small, povms, options, &truth).fidelity);
        large_loss.push_back(1.0 - *reconstruct(large, povms, options, &truth).fidelity);
    }
    const double ratio = median(small_loss) / median(large_loss);
    CHECK(ratio >= 5.0);
    CHECK(ratio <= 20.0);
}

TEST_CASE("reconstruct rejects bad options") {
    const MeasurementProtocol protocol = pauli_bases(1);
    const auto povms = protocol_povms(protocol, ideal_projector_povm());
    Dataset data;
    data.model = MeasurementModel::ideal_projector;
    BasisRecord record;
    record.basis_label = "Z";
    record.shots = 10;
    record.counts = {{{0}, 10.0}};
    data.records.push_back(record);
    data.total_shots = 10;

    MleOptions options;
    options.rank = 5;
    CHECK_THROWS_AS(reconstruct(data, povms, options), std::invalid_argument);

    Dataset unknown_label = data;
    unknown_label.records[0].counts.push_back({{7}, 1.0});
    CHECK_THROWS_AS(reconstruct(unknown_label, povms, {}), std::invalid_argument);
}
