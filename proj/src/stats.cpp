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

#include "iontomo/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "iontomo/photon_stats.hpp"

namespace iontomo {

namespace {

// Kolmogorov distribution survival function Q(lambda).
double kolmogorov_q(double lambda) {
    if (lambda < 1e-8) {
        return 1.0;
    }
    double sum = 0.0;
    double sign = 1.0;
    for (int j = 1; j <= 200; ++j) {
        const double term = std::exp(-2.0 * j * j * lambda * lambda);
        sum += sign * term;
        sign = -sign;
        if (term < 1e-16) {
            break;
        }
    }
    return std::min(1.0, std::max(0.0, 2.0 * sum));
}

}  // namespace

KsResult ks_test(std::vector<double> sample, const std::function<double(double)>& cdf) {
    if (sample.empty()) {
        throw std::invalid_argument("ks_test: empty sample");
    }
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double statistic = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double model = cdf(sample[i]);
        statistic = std::max(statistic, (i + 1.0) / n - model);
        statistic = std::max(statistic, model - static_cast<double>(i) / n);
    }
    const double root_n = std::sqrt(n);
    KsResult result;
    result.statistic = statistic;
    result.p_value = kolmogorov_q((root_n + 0.12 + 0.11 / root_n) * statistic);
    return result;
}

ChiSquareResult chi_square_test(const std::vector<double>& observed,
                                const std::vector<double>& expected, double min_expected) {
    if (observed.size() != expected.size() || observed.empty()) {
        throw std::invalid_argument("chi_square_test: size mismatch");
    }
    double pooled_obs = 0.0;
    double pooled_exp = 0.0;
    double statistic = 0.0;
    int bins = 0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        if (expected[i] < 0.0 || observed[i] < 0.0) {
            throw std::invalid_argument("chi_square_test: negative count");
        }
        if (expected[i] < min_expected) {
            pooled_obs += observed[i];
            pooled_exp += expected[i];
            continue;
        }
        const double diff = observed[i] - expected[i];
        statistic += diff * diff / expected[i];
        ++bins;
    }
    if (pooled_exp >= min_expected) {
        const double diff = pooled_obs - pooled_exp;
        statistic += diff * diff / pooled_exp;
        ++bins;
    }
    if (bins < 2) {
        throw std::invalid_argument("chi_square_test: too few usable bins");
    }
    ChiSquareResult result;
    result.statistic = statistic;
    result.dof = bins - 1;
    result.p_value = 1.0 - regularized_lower_gamma(statistic / 2.0, result.dof / 2.0);
    return result;
}

double mean(const std::vector<double>& values) {
    if (values.empty()) {
        throw std::invalid_argument("mean: empty input");
    }
    double sum = 0.0;
    for (double v : values) {
        sum += v;
    }
    return sum / static_cast<double>(values.size());
}

double sample_stddev(const std::vector<double>& values) {
    if (values.size() < 2) {
        throw std::invalid_argument("sample_stddev: need at least two values");
    }
    const double center = mean(values);
    double sum = 0.0;
    for (double v : values) {
        sum += (v - center) * (v - center);
    }
    return std::sqrt(sum / static_cast<double>(values.size() - 1));
}

double standard_error(const std::vector<double>& values) {
    return sample_stddev(values) / std::sqrt(static_cast<double>(values.size()));
}

double median(std::vector<double> values) {
    if (values.empty()) {
        throw std::invalid_argument("median: empty input");
    }
    std::sort(values.begin(), values.end());
    const std::size_t half = values.size() / 2;
    if (values.size() % 2 == 1) {
        return values[half];
    }
    return 0.5 * (values[half - 1] + values[half]);
}

}  // namespace iontomo
