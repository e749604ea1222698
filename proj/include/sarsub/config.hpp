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
#include "sarsub/geometry.hpp"
#include "sarsub/imaging.hpp"
#include "sarsub/io.hpp"
#include "sarsub/subspace.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sarsub {

enum class ExperimentKind {
    image,              // images, slices, two-stage recovery and spectra per sweep value
    resolution_sweep,   // half-level widths of 1/F_eps against a swept parameter
    reflectivity_error, // relative error of 1/R_eps at the targets against SNR
    stability,          // Monte Carlo image SNR around the first target
    separation,         // local maxima near every target over realizations
};

const char *to_string(ExperimentKind kind) noexcept;

struct MediumConfig {
    double ell = 0.0;
    std::optional<double> sigma;       // absolute strength
    std::optional<double> sigma_tilde; // strength in units of lambda / sqrt(ell L)
    double field_grid_resolution = 0.0; // 0: ell/5
    double integral_step = 0.0;         // 0: ell/10
    double margin = 0.0;                // 0: ell
};

struct PerturbationConfig {
    PerturbationModel model = PerturbationModel::none;
    std::vector<double> direct_sigma; // seconds; one value or one per position
    MediumConfig medium;
};

struct NoiseConfig {
    double snr_db = kNoNoise;
    NoiseConvention convention = NoiseConvention::amplitude;
};

struct ImagingConfig {
    std::vector<Functional> functionals{Functional::inverse_f};
    double epsilon = 1e-8;
    double tau_gap = kDefaultTauGap;
    std::optional<int> rank_override;
    SignalWeighting weighting = SignalWeighting::pseudo_inverse;
    std::optional<double> x_d;     // default a/6
    std::optional<double> omega_d; // default B/2, Hz
    GridSpec grid;
    bool grid_center_given = false; // otherwise the scene centroid
};

struct SweepConfig {
    std::string variable;
    std::vector<double> values;
};

struct AnalysisConfig {
    bool slices = false;
    Vec2 slice_half_length = Vec2(1.0, 1.0);
    int slice_samples = 201;
    bool two_stage = false;
    Vec2 two_stage_window = Vec2(0.5, 0.5); // full width of the refinement window, m
    int two_stage_samples = 51;
    bool spectra = false;
    std::vector<double> epsilons; // reflectivity_error and separation
    int snr_window = 3;           // stability window side, grid nodes
    int separation_cells = 1;
    bool save_images = true;
    bool save_cubes = false;
};

/// A fully specified experiment. Parsing fills every default, so the
/// canonical JSON form (and hence the hash) is independent of how the
/// input was spelled.
struct ExperimentConfig {
    std::string name = "experiment";
    std::string preset; // empty when not derived from a preset
    ExperimentKind kind = ExperimentKind::image;
    AcquisitionConfig acquisition;
    Scene scene;
    PerturbationConfig perturbation;
    NoiseConfig noise;
    ImagingConfig imaging;
    std::vector<SweepConfig> sweeps; // run one after another from the same base
    AnalysisConfig analysis;
    int realizations = 1;
    std::uint64_t seed = 1;
    int threads = 1;
    std::string output_dir;
};

/// Throws ConfigError naming the offending key (dotted path).
ExperimentConfig parse_config(const Json &j);
Json to_json(const ExperimentConfig &config);

/// Recursive merge: objects merge key by key, anything else is replaced.
Json merge_json(Json base, const Json &patch);

/// FNV-1a over the canonical JSON without runtime-only fields (threads, output_dir).
std::string config_hash(const ExperimentConfig &config);

/// Copy of `config` with the sweep variable set to `value`.
ExperimentConfig with_sweep_value(const ExperimentConfig &config, const std::string &variable, double value);

/// Names accepted as sweep variables.
const std::vector<std::string> &sweep_variables();

std::vector<std::string> preset_names();
/// Throws ConfigError("preset", ...) for unknown names.
Json preset_json(const std::string &name);
std::string preset_description(const std::string &name);

} // namespace sarsub
