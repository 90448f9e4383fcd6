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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "iontomo/infotheory.hpp"
#include "iontomo/mle.hpp"

namespace iontomo {

struct SweepSpec {
    std::string axis;          // "time" or "T1"
    std::vector<double> grid;  // strictly increasing
};

struct ValidateSpec {
    std::string mode = "ensemble";  // "ensemble" or "fixed_state"
    int reconstructions = 200;      // fixed_state mode only
};

/// Fully resolved run configuration. Loaded from a JSON file; flags may
/// override seed, output directory and thread count.
struct ExperimentConfig {
    ReadoutPhysics physics{1.0, 0.05, 3.0, 0.05};
    int qubits = 2;
    std::string bases = "pauli";
    MeasurementModel model = MeasurementModel::photon_count;
    int k0 = 0;  // threshold cutoff; 0 selects the total-error minimizer
    double tail_tol = 1e-12;
    long shots = 1000000;
    std::uint64_t seed = 0;
    int ensemble_size = 200;
    bool ensemble_reconstruct = false;
    int rank = 1;  // reconstruction rank used by validate/ensemble runs
    std::optional<SweepSpec> sweep;
    ValidateSpec validate;
    std::string out_dir = "results";
    int threads = 1;
    std::optional<std::string> dump_basis;
    std::map<std::string, std::pair<double, double>> checks;
};

ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& json_text);

/// Flat summary metrics produced by a command, keyed by name; used by
/// --check mode and by tests.
using MetricMap = std::map<std::string, double>;

/// Dump the bright/dark/decay count distributions and the threshold error
/// curve as CSV files.
MetricMap run_dist(const ExperimentConfig& config);

/// Haar-ensemble study: per-state loss spectra (and optionally end-to-end
/// reconstructions), aggregate mean loss with standard error.
MetricMap run_ensemble(const ExperimentConfig& config);

/// Ensemble study per grid point for both fuzzy models along a time or
/// relaxation-time sweep.
MetricMap run_sweep(const ExperimentConfig& config);

/// Simulate reconstructions and compare the empirical fidelity-loss sample
/// against the asymptotic theory with a Kolmogorov-Smirnov test.
MetricMap run_validate(const ExperimentConfig& config);

/// Serialize the configured measurement model's register POVM.
MetricMap run_povm_dump(const ExperimentConfig& config);

/// Failing check descriptions, empty when all configured checks hold.
std::vector<std::string> evaluate_checks(const ExperimentConfig& config,
                                         const MetricMap& metrics);

/// Dataset as CSV text: one (basis_label, outcome_label, count) row per
/// observed outcome, with model tag, seed and physics in the header block.
std::string dataset_csv(const Dataset& dataset, const ReadoutPhysics& phys);

}  // namespace iontomo
