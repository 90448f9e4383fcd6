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

#include <stdexcept>
#include <string>

namespace iontomo {

/// Bad run configuration (CLI/config-file level). Mapped to exit code 2.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A numerical procedure could not meet its contract. Mapped to exit code 3.
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Count-distribution truncation hit the hard cap on the number of bins.
struct TruncationCapError : NumericalError {
    explicit TruncationCapError(const std::string& msg) : NumericalError(msg) {}
};

/// The measurement protocol carries no information about some state
/// directions; the projected information matrix is singular.
struct IncompleteInformationError : NumericalError {
    explicit IncompleteInformationError(const std::string& msg) : NumericalError(msg) {}
};

/// The distribution inversion could not satisfy its mass/mean invariants
/// at the maximum grid size.
struct ResolutionError : NumericalError {
    explicit ResolutionError(const std::string& msg) : NumericalError(msg) {}
};

}  // namespace iontomo
