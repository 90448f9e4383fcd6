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

#include <string>
#include <utility>
#include <vector>

namespace iontomo {

/// Shortest round-trip decimal representation of a double, stable across
/// reruns of the same build.
std::string format_number(double value);

/// One CSV file: '#'-prefixed metadata lines, a header row, data rows.
/// Metadata keys keep insertion order so reruns are byte-identical.
struct CsvTable {
    std::vector<std::pair<std::string, std::string>> metadata;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void meta(const std::string& key, const std::string& value);
    void meta(const std::string& key, double value);
    std::string to_string() const;
    void write(const std::string& path) const;
};

void write_text_file(const std::string& path, const std::string& body);

}  // namespace iontomo
