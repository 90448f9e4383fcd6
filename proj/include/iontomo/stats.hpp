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

struct KsResult {
    double statistic = 0.0;
    double p_value = 0.0;
};

/// One-sample Kolmogorov-Smirnov test of a sample against a fully specified
/// CDF; asymptotic p-value with the Stephens small-sample correction.
KsResult ks_test(std::vector<double> sample, const std::function<double(double)>& cdf);

struct ChiSquareResult {
    double statistic = 0.0;
    int dof = 0;
    double p_value = 0.0;
};

/// Pearson goodness-of-fit test of observed counts against expected counts.
/// Bins with expected count below `min_expected` are pooled into one.
ChiSquareResult chi_square_test(const std::vector<double>& observed,
                                const std::vector<double>& expected,
                                double min_expected = 5.0);

double mean(const std::vector<double>& values);
double sample_stddev(const std::vector<double>& values);
double standard_error(const std::vector<double>& values);
double median(std::vector<double> values);

}  // namespace iontomo
