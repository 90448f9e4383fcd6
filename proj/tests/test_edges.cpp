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

#include <cmath>
#include <filesystem>

#include "doctest.h"
#include "iontomo/errors.hpp"
#include "iontomo/experiments.hpp"
#include "iontomo/simulator.hpp"
#include "iontomo/stats.hpp"

using namespace iontomo;

namespace {
const ReadoutPhysics kBaseline(1.0, 0.05, 3.0, 0.05);
}

TEST_CASE("three-qubit register path works end to end with the threshold model") {
    const MeasurementProtocol protocol = pauli_bases(3);
    CHECK(protocol.basis_count() == 27);
    CHECK(protocol.dim() == 8);

    const Povm reg = register_povm(MeasurementModel::threshold, kBaseline, 0, 1e-12, 3);
    CHECK(reg.size() == 8);

    Rng rng(1212);
    const PureState truth = haar_random_pure(8, rng);
    const Dataset data = run_experiment(truth, protocol, kBaseline, 270000,
                                        MeasurementModel::threshold, 0, 1e-12, Rng(3));
    CHECK(data.records.size() == 27);

    const auto per_basis = protocol_povms(protocol, reg);
    MleOptions options;
    options.rank = 1;
    const ReconstructionResult result = reconstruct(data, per_basis, options, &truth);
    CHECK(result.converged);
    CHECK(*result.fidelity > 0.99);

    const FisherResult info =
        fisher_information(truth, per_basis, allocate_shots(270000, 27));
    const LossSpectrum spectrum = loss_spectrum(info, truth, 270000.0);
    CHECK(spectrum.nu == 14);  // 2s - 2 at s = 8
    CHECK(mean_loss(spectrum) >= 7.0 - 1e-6);  // never below s - 1
}

TEST_CASE("reconstruct reports non-convergence when starved of iterations") {
    Rng rng(99);
    const PureState truth = haar_random_pure(4, rng);
    const MeasurementProtocol protocol = pauli_bases(2);
    const auto per_basis = protocol_povms(
        protocol, register_povm(MeasurementModel::photon_count, kBaseline, 0, 1e-12, 2));
    const Dataset data = run_experiment(truth, protocol, kBaseline, 100000,
                                        MeasurementModel::photon_count, 0, 1e-12, Rng(4));
    MleOptions options;
    options.rank = 1;
    options.max_iter = 2;
    const ReconstructionResult result = reconstruct(data, per_basis, options, &truth);
    CHECK_FALSE(result.converged);
    CHECK(result.iterations == 2);
}

TEST_CASE("loss pdf reports a resolution failure when starved of terms") {
    LossSpectrum spectrum;
    spectrum.nu = 6;
    spectrum.shots = 1e6;
    spectrum.d = {5.5e-6, 3.2e-6, 2.4e-6, 1.3e-6, 8e-7, 3e-7};
    PdfOptions options;
    options.max_terms = 4;
    options.max_points = options.min_points;
    CHECK_THROWS_AS(loss_pdf(spectrum, options), ResolutionError);
}

TEST_CASE("decay pmf stays finite far into the tail") {
    const ReadoutPhysics slow(8.0, 0.05, 3.0, 0.05);
    double sum = 0.0;
    for (int k = 0; k < 900; ++k) {
        const double p = decay_pmf(slow, k);
        CHECK(std::isfinite(p));
        CHECK(p >= 0.0);
        sum += p;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(dark_pmf(slow, 700) >= 0.0);
}

TEST_CASE("validate ensemble mode aggregates per-state theory") {
    ExperimentConfig config;
    config.physics = kBaseline;
    config.model = MeasurementModel::photon_count;
    config.shots = 200000;
    config.seed = 2024;
    config.ensemble_size = 12;
    config.rank = 1;
    config.out_dir =
        (std::filesystem::temp_directory_path() / "iontomo_tests" / "validate_ens").string();
    config.validate.mode = "ensemble";
    const MetricMap metrics = run_validate(config);
    CHECK(metrics.at("reconstructions") == 12.0);
    CHECK(metrics.at("ks_p") > 1e-4);
    CHECK(metrics.at("theory_mean_one_minus_F") > 0.0);
    CHECK(std::filesystem::exists(std::filesystem::path(config.out_dir) / "loss_spectra.csv"));
}

TEST_CASE("multinomial inversion handles the top edge of the cumulative") {
    Rng rng(8);
    const std::vector<double> probs{0.25, 0.25, 0.25, 0.25};
    const auto counts = sample_multinomial(probs, 40000, rng);
    long total = 0;
    for (long c : counts) {
        CHECK(c > 0);
        total += c;
    }
    CHECK(total == 40000);

    // A single certain outcome never spills outside the support.
    const auto certain = sample_multinomial({1.0}, 1000, rng);
    CHECK(certain[0] == 1000);
}
