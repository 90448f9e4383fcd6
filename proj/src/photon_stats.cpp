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

#include "iontomo/photon_stats.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "iontomo/errors.hpp"

namespace iontomo {

namespace {

constexpr double kSumTol = 1e-12;

double poisson_pmf(double mean, int k) {
    if (k < 0) {
        throw std::invalid_argument("poisson_pmf: count must be nonnegative");
    }
    if (mean == 0.0) {
        return k == 0 ? 1.0 : 0.0;
    }
    return std::exp(static_cast<double>(k) * std::log(mean) - mean - std::lgamma(k + 1.0));
}

// Series expansion of the regularized lower gamma, valid for x < a + 1.
double lower_gamma_series(double x, double a) {
    double term = 1.0 / a;
    double sum = term;
    for (int n = 1; n < 10000; ++n) {
        term *= x / (a + n);
        sum += term;
        if (std::abs(term) < std::abs(sum) * std::numeric_limits<double>::epsilon()) {
            break;
        }
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Continued fraction (modified Lentz) for the regularized upper gamma,
// valid for x >= a + 1.
double upper_gamma_cf(double x, double a) {
    constexpr double kTiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10000; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < std::numeric_limits<double>::epsilon()) {
            break;
        }
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

ReadoutPhysics::ReadoutPhysics(double exposure, double decay_rate, double bright_rate,
                               double dark_rate)
    : exposure(exposure), decay_rate(decay_rate), bright_rate(bright_rate), dark_rate(dark_rate) {
    if (!(exposure > 0.0)) {
        throw std::invalid_argument("ReadoutPhysics: exposure must be positive");
    }
    if (!(decay_rate >= 0.0)) {
        throw std::invalid_argument("ReadoutPhysics: decay rate must be nonnegative");
    }
    if (!(dark_rate >= 0.0)) {
        throw std::invalid_argument("ReadoutPhysics: dark count rate must be nonnegative");
    }
    if (!(bright_rate > 0.0)) {
        throw std::invalid_argument("ReadoutPhysics: bright rate must be positive");
    }
    if (!(bright_rate > decay_rate)) {
        throw std::invalid_argument(
            "ReadoutPhysics: bright rate must strictly exceed the decay rate");
    }
}

CountDistribution::CountDistribution(std::vector<double> pmf_in, double tail_mass_in)
    : pmf(std::move(pmf_in)), tail_mass(tail_mass_in) {
    if (pmf.empty()) {
        throw std::invalid_argument("CountDistribution: empty pmf");
    }
    double sum = 0.0;
    for (double p : pmf) {
        if (!(p >= 0.0)) {
            throw std::invalid_argument("CountDistribution: negative probability");
        }
        sum += p;
    }
    if (std::abs(sum - 1.0) > kSumTol) {
        throw std::invalid_argument("CountDistribution: pmf sums to " + std::to_string(sum));
    }
}

double regularized_lower_gamma(double x, double a) {
    if (x < 0.0 || !(a > 0.0) || std::isnan(x) || std::isnan(a)) {
        throw std::domain_error("regularized_lower_gamma: requires x >= 0 and a > 0");
    }
    if (x == 0.0) {
        return 0.0;
    }
    if (std::isinf(x)) {
        return 1.0;
    }
    if (x < a + 1.0) {
        return lower_gamma_series(x, a);
    }
    return 1.0 - upper_gamma_cf(x, a);
}

double bright_pmf(const ReadoutPhysics& phys, int k) {
    return poisson_pmf(phys.bright_rate * phys.exposure, k);
}

double decay_pmf(const ReadoutPhysics& phys, int k) {
    if (k < 0) {
        throw std::invalid_argument("decay_pmf: count must be nonnegative");
    }
    const double survive = std::exp(-phys.decay_rate * phys.exposure);
    const double atom = (k == 0) ? survive : 0.0;
    if (phys.decay_rate == 0.0) {
        return atom;
    }
    const double t = phys.exposure;
    const double gap = (phys.bright_rate - phys.decay_rate) * t;
    const double partial = regularized_lower_gamma(gap, k + 1.0);
    if (partial <= 0.0) {
        return atom;
    }
    // (bright_rate*t)^k overflows in direct form well below the truncation
    // bound, so the whole factor is assembled in log space.
    const double log_term = std::log(phys.decay_rate * t) - phys.decay_rate * t +
                            static_cast<double>(k) * std::log(phys.bright_rate * t) -
                            (k + 1.0) * std::log(gap) + std::log(partial);
    return std::exp(log_term) + atom;
}

double dark_pmf(const ReadoutPhysics& phys, int k) {
    if (k < 0) {
        throw std::invalid_argument("dark_pmf: count must be nonnegative");
    }
    const double background_mean = phys.dark_rate * phys.exposure;
    if (background_mean == 0.0) {
        return decay_pmf(phys, k);
    }
    double sum = 0.0;
    for (int k1 = 0; k1 <= k; ++k1) {
        sum += poisson_pmf(background_mean, k1) * decay_pmf(phys, k - k1);
    }
    return sum;
}

CountDistribution truncate(const std::function<double(int)>& pmf, double tail_tol, int hard_cap) {
    if (!(tail_tol > 0.0 && tail_tol < 1.0)) {
        throw std::invalid_argument("truncate: tail tolerance must be in (0, 1)");
    }
    std::vector<double> values;
    double cumulative = 0.0;
    for (int k = 0; k <= hard_cap; ++k) {
        values.push_back(pmf(k));
        cumulative += values.back();
        const double tail = 1.0 - cumulative;
        if (tail < tail_tol) {
            values.back() += tail;  // fold, keeping the stored mass exactly one
            return CountDistribution(std::move(values), std::max(tail, 0.0));
        }
    }
    throw TruncationCapError("truncate: support exceeds hard cap of " + std::to_string(hard_cap) +
                             " bins; parameters look pathological");
}

CountDistribution truncate_at(const std::function<double(int)>& pmf, int max_count) {
    if (max_count < 0) {
        throw std::invalid_argument("truncate_at: bound must be nonnegative");
    }
    std::vector<double> values(max_count + 1);
    double cumulative = 0.0;
    for (int k = 0; k <= max_count; ++k) {
        values[k] = pmf(k);
        cumulative += values[k];
    }
    const double tail = 1.0 - cumulative;
    values.back() += tail;
    return CountDistribution(std::move(values), std::max(tail, 0.0));
}

CountDistribution truncated_bright(const ReadoutPhysics& phys, double tail_tol) {
    return truncate([&](int k) { return bright_pmf(phys, k); }, tail_tol);
}

CountDistribution truncated_dark(const ReadoutPhysics& phys, double tail_tol) {
    return truncate([&](int k) { return dark_pmf(phys, k); }, tail_tol);
}

CountDistribution truncated_decay(const ReadoutPhysics& phys, double tail_tol) {
    return truncate([&](int k) { return decay_pmf(phys, k); }, tail_tol);
}

ReadoutErrors readout_errors(const ReadoutPhysics& phys, int k0) {
    if (k0 < 1) {
        throw std::invalid_argument("readout_errors: threshold must be at least 1");
    }
    double bright_below = 0.0;
    double dark_below = 0.0;
    for (int k = 0; k < k0; ++k) {
        bright_below += bright_pmf(phys, k);
        dark_below += dark_pmf(phys, k);
    }
    return ReadoutErrors{bright_below, 1.0 - dark_below};
}

int optimal_threshold(const ReadoutPhysics& phys, double tail_tol) {
    const CountDistribution bright = truncated_bright(phys, tail_tol);
    const CountDistribution dark = truncated_dark(phys, tail_tol);
    const int max_count = std::max(bright.max_count(), dark.max_count());

    int best_k0 = 1;
    double best_total = std::numeric_limits<double>::infinity();
    double bright_below = 0.0;
    double dark_below = 0.0;
    for (int k0 = 1; k0 <= std::max(max_count, 1); ++k0) {
        bright_below += bright_pmf(phys, k0 - 1);
        dark_below += dark_pmf(phys, k0 - 1);
        const double total = bright_below + (1.0 - dark_below);
        if (total < best_total) {
            best_total = total;
            best_k0 = k0;
        }
    }
    return best_k0;
}

}  // namespace iontomo
