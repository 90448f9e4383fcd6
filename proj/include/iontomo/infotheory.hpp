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

#include "iontomo/povm.hpp"

namespace iontomo {

/// Fisher information of the measurement protocol in the real
/// parametrization (Re psi, Im psi) of a pure state, plus the list of
/// effects skipped because their outcome probability vanished.
struct FisherResult {
    Eigen::MatrixXd matrix;                      // 2s x 2s, symmetric PSD
    std::vector<std::pair<int, int>> skipped;    // (basis index, effect index)
};

FisherResult fisher_information(const PureState& state, const std::vector<BasisPovm>& povms,
                                const std::vector<long>& shots_per_basis);

/// Eigenvalues d_j of the asymptotic covariance of the state estimate in the
/// tangent space at the true state; the fidelity loss is distributed as
/// sum_j d_j xi_j^2 with independent standard normal xi_j.
struct LossSpectrum {
    std::vector<double> d;  // descending, length nu
    int nu = 0;             // 2s - 2 independent parameters of a pure state
    double shots = 0.0;     // total sample size the spectrum was computed for

    double total() const;   // sum of d_j = mean fidelity loss
};

/// Project the information matrix onto the tangent space orthogonal to the
/// normalization and global-phase directions and invert it. Throws
/// IncompleteInformationError when the protocol leaves directions
/// unidentified.
LossSpectrum loss_spectrum(const FisherResult& information, const PureState& state, double shots);

/// Sample-size-normalized mean fidelity loss L = n * sum_j d_j.
double mean_loss(const LossSpectrum& spectrum);

/// Characteristic function of the fidelity loss,
/// prod_j (1 - 2 i d_j t)^(-1/2), via principal logarithms.
Complex char_function(const LossSpectrum& spectrum, double t);

struct PdfOptions {
    double range_multiplier = 20.0;  // loss axis spans [0, multiplier * sum d_j]
    int min_points = 1 << 12;
    int max_points = 1 << 20;
    double char_cutoff = 1e-12;      // stop the frequency sum below this envelope
    long max_terms = 1L << 26;
};

/// Probability density of the fidelity loss on a uniform grid of cell
/// centers, recovered by discrete inverse Fourier transform of the
/// characteristic function (cell-averaged, so the stored mass telescopes to
/// the true distribution function). Throws ResolutionError if the mass and
/// mean invariants cannot be met at the largest grid.
struct LossDistribution {
    std::vector<double> grid;        // cell centers
    std::vector<double> density;     // nonnegative after ripple clipping
    double cell_width = 0.0;
    double mass = 0.0;               // integral of the stored density
    double mean = 0.0;               // first moment of the stored density
    std::vector<double> cumulative;  // CDF at cell edges, size grid.size() + 1

    /// Piecewise-linear CDF of the stored density; 0 below the grid, `mass`
    /// above it.
    double cdf(double x) const;
};

LossDistribution loss_pdf(const LossSpectrum& spectrum, const PdfOptions& options = {});

}  // namespace iontomo
