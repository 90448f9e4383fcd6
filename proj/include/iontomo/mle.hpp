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

#include <optional>
#include <vector>

#include "iontomo/simulator.hpp"

namespace iontomo {

/// Root factor of a density matrix: rho = root * root^dagger with unit trace.
/// Positivity and normalization hold by construction for any root, and the
/// root is only determined up to a right unitary gauge.
struct RootState {
    CMatrix root;  // dim x rank

    explicit RootState(CMatrix root);

    DensityMatrix to_density() const;

    int dim() const { return static_cast<int>(root.rows()); }
    int rank() const { return static_cast<int>(root.cols()); }
};

struct MleOptions {
    double tol = 1e-11;   // relative log-likelihood change at which to stop
    int max_iter = 10000;
    int rank = 0;         // 0 selects full rank
};

struct ReconstructionResult {
    DensityMatrix estimate;
    double log_likelihood = 0.0;
    int iterations = 0;
    bool converged = false;
    bool rank_deficient = false;  // full rank requested, data supports less
    std::vector<double> loglik_trace;
    std::optional<double> fidelity;  // vs. supplied truth
};

/// Log-likelihood of the dataset under the per-basis effective POVMs.
/// Probabilities below 1e-300 are floored; a positive count on an outcome of
/// exactly zero probability yields -infinity (model/data mismatch).
double log_likelihood(const Dataset& dataset, const std::vector<BasisPovm>& povms,
                      const DensityMatrix& state);

/// Maximum-likelihood state reconstruction over the root parametrization.
/// Damped fixed-point ascent; the log-likelihood never decreases across
/// accepted iterations.
ReconstructionResult reconstruct(const Dataset& dataset, const std::vector<BasisPovm>& povms,
                                 const MleOptions& options = {},
                                 const PureState* truth = nullptr);

/// Invert the binary response p' = (1 - eps10) p + eps01 (1 - p) for p,
/// clamped to [0, 1]. Rejects degenerate channels with eps10 + eps01 >= 1.
double invert_binary_response(double p0_distorted, double eps10, double eps01);

}  // namespace iontomo
