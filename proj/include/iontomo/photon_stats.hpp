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

#include <functional>
#include <vector>

namespace iontomo {

/// Physical readout parameters of one fluorescence exposure.
///
/// A bright ion scatters detector counts at rate `bright_rate` for the whole
/// exposure. A dark ion contributes background counts at rate `dark_rate`
/// and may decay into the bright manifold at rate `decay_rate` (the inverse
/// of the amplitude relaxation time), fluorescing for the remainder of the
/// exposure.
struct ReadoutPhysics {
    double exposure;     // duration of one readout window
    double decay_rate;   // dark-level decay intensity, 1/T1
    double bright_rate;  // fluorescence count intensity of the bright level
    double dark_rate;    // background + detector dark count intensity

    ReadoutPhysics(double exposure, double decay_rate, double bright_rate, double dark_rate);
};

/// Truncated photon-count distribution. The tail beyond the last bin is
/// folded into that bin so the stored mass is exactly one.
struct CountDistribution {
    std::vector<double> pmf;  // index = photon count, 0..max_count()
    double tail_mass = 0.0;   // mass that was folded into the last bin

    CountDistribution(std::vector<double> pmf, double tail_mass);

    int max_count() const { return static_cast<int>(pmf.size()) - 1; }
};

/// Regularized lower incomplete gamma function of upper limit `x` and shape
/// `a`: the integral of z^(a-1) e^(-z) over [0, x], divided by Gamma(a).
double regularized_lower_gamma(double x, double a);

/// Probability of k counts from a bright ion: Poisson with mean
/// bright_rate * exposure.
double bright_pmf(const ReadoutPhysics& phys, int k);

/// Probability of k fluorescence counts from a dark ion that may decay
/// during the exposure. Point mass at zero when the decay rate is zero.
double decay_pmf(const ReadoutPhysics& phys, int k);

/// Probability of k counts from a dark ion: background Poisson counts
/// convolved with the decay channel.
double dark_pmf(const ReadoutPhysics& phys, int k);

/// Truncate a normalized pmf at the smallest bound whose tail mass is below
/// `tail_tol`, folding the tail into the last bin. Throws TruncationCapError
/// if the bound would exceed `hard_cap`.
CountDistribution truncate(const std::function<double(int)>& pmf, double tail_tol,
                           int hard_cap = 10000);

/// Truncate a normalized pmf at a fixed bound, folding the remainder into
/// the last bin. Used to align two distributions on a common support.
CountDistribution truncate_at(const std::function<double(int)>& pmf, int max_count);

CountDistribution truncated_bright(const ReadoutPhysics& phys, double tail_tol);
CountDistribution truncated_dark(const ReadoutPhysics& phys, double tail_tol);
CountDistribution truncated_decay(const ReadoutPhysics& phys, double tail_tol);

/// Misclassification rates of threshold discrimination at count cutoff k0:
/// eps10 = P(bright ion read as dark), eps01 = P(dark ion read as bright).
struct ReadoutErrors {
    double eps10;
    double eps01;
};

ReadoutErrors readout_errors(const ReadoutPhysics& phys, int k0);

/// The threshold in [1, max count] minimizing eps10 + eps01, smallest on ties.
int optimal_threshold(const ReadoutPhysics& phys, double tail_tol = 1e-12);

}  // namespace iontomo
