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

#include "iontomo/infotheory.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "iontomo/errors.hpp"

namespace iontomo {

namespace {

constexpr double kSkipProbability = 1e-14;
constexpr double kTwoPi = 6.283185307179586476925286766559;

// In-place radix-2 forward DFT, X_i = sum_m x_m exp(-2 pi i m i / M).
void fft_forward(std::vector<Complex>& a) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) {
            j ^= bit;
        }
        j ^= bit;
        if (i < j) {
            std::swap(a[i], a[j]);
        }
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double angle = -kTwoPi / static_cast<double>(len);
        const Complex root(std::cos(angle), std::sin(angle));
        for (std::size_t start = 0; start < n; start += len) {
            Complex w(1.0, 0.0);
            for (std::size_t i = 0; i < len / 2; ++i) {
                const Complex even = a[start + i];
                const Complex odd = a[start + i + len / 2] * w;
                a[start + i] = even + odd;
                a[start + i + len / 2] = even - odd;
                w *= root;
            }
        }
    }
}

double sinc(double z) {
    if (std::abs(z) < 1e-8) {
        return 1.0 - z * z / 6.0;
    }
    return std::sin(z) / z;
}

}  // namespace

FisherResult fisher_information(const PureState& state, const std::vector<BasisPovm>& povms,
                                const std::vector<long>& shots_per_basis) {
    if (povms.empty() || povms.size() != shots_per_basis.size()) {
        throw std::invalid_argument("fisher_information: povms/shots mismatch");
    }
    const int dim = state.dim();
    FisherResult result;
    result.matrix = Eigen::MatrixXd::Zero(2 * dim, 2 * dim);
    Eigen::VectorXd score(2 * dim);
    for (std::size_t b = 0; b < povms.size(); ++b) {
        if (povms[b].povm.dim != dim) {
            throw std::invalid_argument("fisher_information: dimension mismatch");
        }
        const double weight = static_cast<double>(shots_per_basis[b]);
        for (std::size_t e = 0; e < povms[b].povm.effects.size(); ++e) {
            const CVector image = povms[b].povm.effects[e].matrix * state.amplitudes;
            const double prob = state.amplitudes.dot(image).real();
            if (prob < kSkipProbability) {
                result.skipped.emplace_back(static_cast<int>(b), static_cast<int>(e));
                continue;
            }
            // d p / d(Re psi_m) = 2 Re[(E psi)_m], d p / d(Im psi_m) = 2 Im[...].
            score.head(dim) = 2.0 * image.real();
            score.tail(dim) = 2.0 * image.imag();
            result.matrix.noalias() += (weight / prob) * (score * score.transpose());
        }
    }
    return result;
}

double LossSpectrum::total() const {
    double sum = 0.0;
    for (double value : d) {
        sum += value;
    }
    return sum;
}

LossSpectrum loss_spectrum(const FisherResult& information, const PureState& state, double shots) {
    const int dim = state.dim();
    const int full = 2 * dim;
    if (information.matrix.rows() != full || information.matrix.cols() != full) {
        throw std::invalid_argument("loss_spectrum: information matrix size mismatch");
    }
    if (!(shots > 0.0)) {
        throw std::invalid_argument("loss_spectrum: shots must be positive");
    }

    // Gauge directions: the normalization ray and the global phase.
    Eigen::VectorXd radial(full), phase(full);
    radial.head(dim) = state.amplitudes.real();
    radial.tail(dim) = state.amplitudes.imag();
    phase.head(dim) = -state.amplitudes.imag();
    phase.tail(dim) = state.amplitudes.real();

    Eigen::MatrixXd seed = Eigen::MatrixXd::Identity(full, full);
    seed.col(0) = radial;
    seed.col(1) = phase;
    const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(seed).householderQ();
    const Eigen::MatrixXd tangent = q.rightCols(full - 2);

    const Eigen::MatrixXd projected = tangent.transpose() * information.matrix * tangent;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(projected);
    const Eigen::VectorXd eigs = solver.eigenvalues();
    const double scale = std::max(eigs.cwiseAbs().maxCoeff(), 1e-30);
    std::string null_directions;
    for (int i = 0; i < eigs.size(); ++i) {
        if (eigs(i) < 1e-10 * scale) {
            if (!null_directions.empty()) {
                null_directions += ", ";
            }
            null_directions += "tangent eigendirection " + std::to_string(i) +
                               " (eigenvalue " + std::to_string(eigs(i)) + ")";
        }
    }
    if (!null_directions.empty()) {
        throw IncompleteInformationError(
            "loss_spectrum: protocol does not identify the state; null directions: " +
            null_directions);
    }

    LossSpectrum spectrum;
    spectrum.nu = full - 2;
    spectrum.shots = shots;
    spectrum.d.resize(spectrum.nu);
    for (int i = 0; i < spectrum.nu; ++i) {
        spectrum.d[i] = 1.0 / eigs(eigs.size() - 1 - i);  // descending d
    }
    return spectrum;
}

double mean_loss(const LossSpectrum& spectrum) { return spectrum.shots * spectrum.total(); }

Complex char_function(const LossSpectrum& spectrum, double t) {
    Complex log_sum(0.0, 0.0);
    for (double d : spectrum.d) {
        log_sum += std::log(Complex(1.0, -2.0 * d * t));
    }
    return std::exp(-0.5 * log_sum);
}

double LossDistribution::cdf(double x) const {
    if (grid.empty() || x <= 0.0) {
        return 0.0;
    }
    const auto cell = static_cast<std::size_t>(x / cell_width);
    if (cell >= density.size()) {
        return mass;
    }
    return cumulative[cell] + density[cell] * (x - static_cast<double>(cell) * cell_width);
}

LossDistribution loss_pdf(const LossSpectrum& spectrum, const PdfOptions& options) {
    const double sum_d = spectrum.total();
    if (!(sum_d > 0.0)) {
        throw std::invalid_argument("loss_pdf: spectrum has no mass");
    }
    for (double d : spectrum.d) {
        if (!(d > 0.0)) {
            throw std::invalid_argument("loss_pdf: spectrum has a nonpositive eigenvalue");
        }
    }
    const double range = options.range_multiplier * sum_d;
    const double dt = kTwoPi / range;

    // Reference law: a scaled chi-square with the same nu and the geometric
    // mean of the eigenvalues as scale. It shares the leading large-frequency
    // asymptotics of the characteristic function, so the remaining inversion
    // integrand decays one power faster and the integrable x -> 0 singularity
    // is carried by the closed-form reference, not the transform.
    double log_scale = 0.0;
    for (double d : spectrum.d) {
        log_scale += std::log(d);
    }
    const double ref_scale = std::exp(log_scale / spectrum.d.size());
    const double half_nu = 0.5 * static_cast<double>(spectrum.d.size());
    const auto ref_cdf = [&](double x) {
        return regularized_lower_gamma(x / (2.0 * ref_scale), half_nu);
    };
    const auto ref_char = [&](double t) {
        return std::exp(-half_nu * std::log(Complex(1.0, -2.0 * ref_scale * t)));
    };

    std::string failure;
    for (int points = options.min_points; points <= options.max_points; points *= 2) {
        const double dx = range / points;

        // Fold the frequency sum of the difference characteristic function
        // into one grid period before the transform; the half-cell shift of
        // the grid centers becomes a per-term phase. The sinc factor turns
        // point values into exact cell averages, so the stored mass
        // telescopes through the distribution function.
        std::vector<Complex> folded(points, Complex(0.0, 0.0));
        int quiet_streak = 0;
        for (long k = 1; k <= options.max_terms; ++k) {
            const double t = dt * static_cast<double>(k);
            const double window = std::min(1.0, 2.0 / (t * dx));
            const Complex difference = char_function(spectrum, t) - ref_char(t);
            if (std::abs(difference) * window < options.char_cutoff) {
                if (++quiet_streak >= 64) {
                    break;
                }
            } else {
                quiet_streak = 0;
            }
            const Complex value = difference * sinc(0.5 * t * dx);
            const double angle = -3.14159265358979323846 * static_cast<double>(k) / points;
            folded[k & (points - 1)] += value * Complex(std::cos(angle), std::sin(angle));
        }
        fft_forward(folded);

        LossDistribution dist;
        dist.cell_width = dx;
        dist.grid.resize(points);
        dist.density.resize(points);
        double edge_below = ref_cdf(0.0);
        for (int i = 0; i < points; ++i) {
            const double edge_above = ref_cdf((i + 1) * dx);
            dist.grid[i] = (i + 0.5) * dx;
            dist.density[i] = (edge_above - edge_below) / dx + 2.0 * folded[i].real() / range;
            edge_below = edge_above;
        }

        double peak = 0.0;
        for (double value : dist.density) {
            peak = std::max(peak, value);
        }
        double worst_ripple = 0.0;
        for (double& value : dist.density) {
            if (value < 0.0) {
                worst_ripple = std::max(worst_ripple, -value);
                value = 0.0;
            }
        }
        dist.mass = 0.0;
        dist.mean = 0.0;
        dist.cumulative.assign(points + 1, 0.0);
        for (int i = 0; i < points; ++i) {
            dist.mass += dist.density[i] * dx;
            dist.mean += dist.grid[i] * dist.density[i] * dx;
            dist.cumulative[i + 1] = dist.mass;
        }

        if (worst_ripple > 1e-9 * peak) {
            failure = "negative ripple " + std::to_string(worst_ripple) + " exceeds clip level";
            continue;
        }
        if (std::abs(dist.mass - 1.0) > 1e-4) {
            failure = "mass " + std::to_string(dist.mass);
            continue;
        }
        if (std::abs(dist.mean - sum_d) > 1e-3 * sum_d) {
            failure = "mean " + std::to_string(dist.mean) + " vs " + std::to_string(sum_d);
            continue;
        }
        return dist;
    }
    throw ResolutionError("loss_pdf: invariants unmet at max grid size (" + failure + ")");
}

}  // namespace iontomo
