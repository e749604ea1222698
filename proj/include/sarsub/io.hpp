// SPDX-License-Identifier: Apache-2.0
//
// sarsub: quantitative signal-subspace SAR imaging toolkit
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include "sarsub/forward.hpp"
#include "sarsub/imaging.hpp"
#include "sarsub/subspace.hpp"

#include "json.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace sarsub {

using Json = nlohmann::ordered_json;

/// Shortest decimal that parses back to exactly `x`; "nan", "inf", "-inf" otherwise.
std::string format_double(double x);

/// Inverse of format_double. Throws IoError on malformed text.
double parse_double(const std::string &text);

/// In-memory CSV table; every cell is stored as text.
struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> row);
    std::size_t column(const std::string &name) const; // throws IoError if absent
    double number(std::size_t row, const std::string &name) const;
};

// Cell helpers so that call sites read naturally.
inline std::string cell(double x) { return format_double(x); }
inline std::string cell(int x) { return std::to_string(x); }
inline std::string cell(std::size_t x) { return std::to_string(x); }
inline std::string cell(const std::string &s) { return s; }
inline std::string cell(const char *s) { return s; }

void write_csv(const std::filesystem::path &path, const CsvTable &table);
CsvTable read_csv(const std::filesystem::path &path);

void write_json(const std::filesystem::path &path, const Json &value);
Json read_json(const std::filesystem::path &path);

/// Sidecar path for an output file: "image.csv" -> "image.csv.json".
std::filesystem::path sidecar_path(const std::filesystem::path &path);

/// Cube container: one line of JSON header (geometry, provenance) followed by
/// a CSV body "m,n,re,im". Doubles round-trip exactly.
void write_cube(const std::filesystem::path &path, const DataCube &cube);
DataCube read_cube(const std::filesystem::path &path);

Json to_json(const AcquisitionConfig &config);
Json to_json(const ImageMetadata &meta);

/// Image CSV: x,y,value for real images, x,y,value_re,value_im for complex ones.
CsvTable image_table(const ImageGrid &image);

/// Per-block spectrum: block, index, sigma, sigma_thresholded, inverse, signal.
/// sigma_thresholded replaces noise-subspace values by epsilon * sigma_1.
CsvTable spectrum_table(const BlockSVD &svd, const RegularizedSpectrum &spectrum);

} // namespace sarsub
