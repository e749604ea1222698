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

#include "sarsub/config.hpp"

#include "sarsub/errors.hpp"

#include <cmath>
#include <map>

namespace sarsub {

namespace {

// X-band airborne geometry of the single- and multi-target studies.
constexpr double kF0 = 9.6e9;
constexpr double kC = 3.0e8;
constexpr double kLambda = kC / kF0; // 3.125 cm
const double kK0 = 2.0 * kPi / kLambda;

// Flat random-medium geometry: ell = 100 lambda, L = R = 100 ell, a = 24 ell, B = f0/2.
constexpr double kEll = 100.0 * kLambda;

Json target(double x, double y, double re, double im)
{
    return {{"x", x}, {"y", y}, {"rho", {re, im}}};
}

Json grid(double cx, double cy, double wx, double wy, int nx, int ny)
{
    return {{"center", {cx, cy}}, {"extent", {wx, wy}}, {"n", {nx, ny}}};
}

Json flat_acquisition()
{
    return {{"center_frequency_f0", kF0}, {"bandwidth_B", 0.5 * kF0}, {"aperture_a", 24.0 * kEll},
            {"range_offset_R", 100.0 * kEll}, {"height_H", 0.0}};
}

Json medium(double sigma_tilde)
{
    return {{"model", "random_medium"}, {"medium", {{"ell", kEll}, {"sigma_tilde", sigma_tilde}}}};
}

std::vector<double> decades(int lo, int hi)
{
    std::vector<double> v;
    for (int e = lo; e <= hi; ++e)
        v.push_back(std::pow(10.0, e));
    return v;
}

Json single_target()
{
    return Json::array({target(1.0, 1.0, 0.0, 3.4)});
}

Json three_targets()
{
    return Json::array({target(0.01, 0.1, 0.0, 3.4), target(-0.30, -0.50, 0.0, 4.2),
                        target(-0.50, 0.50, 0.0, 3.1)});
}

// Local window of 10/k0 in cross-range and 0.2/k0 in range around a target.
Json local_window(double x, double y)
{
    return grid(x, y, 10.0 / kK0, 0.2 / kK0, 51, 51);
}

Json resolution_sweep(const std::string &name, const std::string &variable, std::vector<double> values)
{
    return {{"name", name},
            {"kind", "resolution_sweep"},
            {"scene", single_target()},
            {"imaging", {{"epsilon", 1e-8}}},
            {"sweep", {{"variable", variable}, {"values", values}}}};
}

struct Preset {
    std::string description;
    Json config;
};

const std::map<std::string, Preset> &registry()
{
    static const std::map<std::string, Preset> presets = [] {
        std::map<std::string, Preset> p;

        p["fig3"] = {"single target at (1 m, 1 m), rho = 3.4i, 44.13 dB: 1/F and 1/R images with slices",
                     {{"name", "fig3"},
                      {"kind", "image"},
                      {"scene", single_target()},
                      {"noise", {{"snr_db", 44.1339}}},
                      {"imaging", {{"functionals", {"inverse_f", "inverse_r"}}, {"epsilon", 1e-8},
                                   {"grid", local_window(1.0, 1.0)}}},
                      {"analysis", {{"slices", true}, {"slice_half_length", {5.0 / kK0, 0.1 / kK0}}}}}};

        p["fig4-epsilon-sweep"] = {"noiseless resolution against epsilon, 1e-10 .. 1e-4",
                                   resolution_sweep("fig4-epsilon-sweep", "epsilon", decades(-10, -4))};
        p["fig4-bandwidth-sweep"] = {
            "noiseless resolution against bandwidth (c/B), epsilon = 1e-8",
            resolution_sweep("fig4-bandwidth-sweep", "bandwidth_B", {311e6, 415e6, 622e6, 933e6, 1244e6})};
        p["fig5-aperture-sweep"] = {
            "noiseless resolution against aperture (L/a), epsilon = 1e-8",
            resolution_sweep("fig5-aperture-sweep", "aperture_a", {65.0, 97.5, 130.0, 195.0, 260.0})};
        p["fig5-range-sweep"] = {"noiseless resolution against range offset (L/R) at fixed L, epsilon = 1e-8",
                                 resolution_sweep("fig5-range-sweep", "range_offset_R_fixed_L",
                                                  {1775.0, 2662.5, 3550.0, 5325.0, 7100.0})};

        p["fig6-reflectivity"] = {
            "1/R slices through a single target at 44.13 dB, epsilon = 1e-10",
            {{"name", "fig6-reflectivity"},
             {"kind", "image"},
             {"scene", single_target()},
             {"noise", {{"snr_db", 44.1339}}},
             {"imaging", {{"functionals", {"inverse_r"}}, {"epsilon", 1e-10}, {"grid", local_window(1.0, 1.0)}}},
             {"analysis", {{"slices", true}, {"slice_half_length", {5.0 / kK0, 0.1 / kK0}}, {"save_images", false}}}}};

        std::vector<double> snrs;
        for (int s = 0; s <= 80; s += 5)
            snrs.push_back(s);
        p["fig7-snr-error"] = {"relative reflectivity error against SNR for epsilon = 1e-6, 1e-8, 1e-10",
                               {{"name", "fig7-snr-error"},
                                {"kind", "reflectivity_error"},
                                {"scene", single_target()},
                                {"realizations", 20},
                                {"sweep", {{"variable", "snr_db"}, {"values", snrs}}},
                                {"analysis", {{"epsilons", {1e-6, 1e-8, 1e-10}}}}}};

        p["fig8-3targets"] = {"three targets at 64.17 dB: 1/F images for three epsilons, two-stage recovery",
                              {{"name", "fig8-3targets"},
                               {"kind", "image"},
                               {"scene", three_targets()},
                               {"noise", {{"snr_db", 64.1695}}},
                               {"imaging", {{"functionals", {"inverse_f"}}, {"grid", grid(0, 0, 5, 5, 51, 51)}}},
                               {"sweep", {{"variable", "epsilon"}, {"values", {1e-6, 1e-8, 1e-10}}}},
                               {"analysis",
                                {{"two_stage", true},
                                 {"two_stage_window", {10.0 / kK0, 0.2 / kK0}},
                                 {"slices", true},
                                 {"slice_half_length", {5.0 / kK0, 0.1 / kK0}}}}}};

        p["fig8-snr-spectra"] = {"three targets at 44.17 and 24.17 dB: 1/F images and block singular values",
                                 {{"name", "fig8-snr-spectra"},
                                  {"kind", "image"},
                                  {"scene", three_targets()},
                                  {"imaging", {{"functionals", {"inverse_f"}}, {"epsilon", 1e-8},
                                               {"grid", grid(0, 0, 5, 5, 51, 51)}}},
                                  {"sweep", {{"variable", "snr_db"}, {"values", {44.1695, 24.1695}}}},
                                  {"analysis", {{"spectra", true}}}}};

        const double eps9 = 0.02;
        p["fig9-random-medium"] = {
            "single target in a random medium, epsilon = 0.02, sigma_tilde/sqrt(eps) = 0, eps, 1",
            {{"name", "fig9-random-medium"},
             {"kind", "image"},
             {"acquisition", flat_acquisition()},
             {"scene", Json::array({target(0, 0, 1.2584, 0)})},
             {"perturbation", medium(0.0)},
             {"imaging", {{"functionals", {"inverse_f"}}, {"epsilon", eps9},
                          {"grid", grid(0, 0, 16 * kLambda, 2 * kLambda, 81, 81)}}},
             {"sweep",
              {{"variable", "sigma_tilde"}, {"values", {0.0, eps9 * std::sqrt(eps9), std::sqrt(eps9)}}}}}};

        p["fig10-stability"] = {
            "image SNR over 100 media: against epsilon at sigma_tilde = 0.4, against sigma_tilde at epsilon = 0.2",
            {{"name", "fig10-stability"},
             {"kind", "stability"},
             {"acquisition", flat_acquisition()},
             {"scene", Json::array({target(0, 0, 1.2584, 0)})},
             {"perturbation", medium(0.4)},
             {"realizations", 100},
             {"imaging", {{"functionals", {"sar", "sar_abs", "cint", "inverse_f"}}, {"epsilon", 0.2},
                          {"grid", grid(0, 0, 6 * kLambda, 6 * kLambda, 31, 31)}}},
             {"sweeps", Json::array({{{"variable", "epsilon"}, {"values", {0.01, 0.02, 0.05, 0.1, 0.2, 0.5}}},
                                     {{"variable", "sigma_tilde"}, {"values", {0.1, 0.2, 0.3, 0.4, 0.5}}}})},
             {"analysis", {{"snr_window", 3}}}}};

        p["fig11-cint-compare"] = {
            "CINT and 1/F images of one target with sigma_tilde/sqrt(eps) = sqrt(eps), epsilon = 0.02",
            {{"name", "fig11-cint-compare"},
             {"kind", "image"},
             {"acquisition", flat_acquisition()},
             {"scene", Json::array({target(0, 0, 1.2584, 0)})},
             {"perturbation", medium(eps9)},
             {"imaging", {{"functionals", {"cint", "inverse_f"}}, {"epsilon", eps9},
                          {"grid", grid(0, 0, 16 * kLambda, 4 * kLambda, 81, 81)}}}}};

        // Staircase of four targets: alternating cross-range offsets of
        // +-0.4 lambda at ranges 0.6 lambda apart, all on grid nodes.
        Json four = Json::array();
        for (int k = 0; k < 4; ++k)
            four.push_back(target((k % 2 ? 0.4 : -0.4) * kLambda, (k - 1.5) * 0.6 * kLambda, 1.2584, 0));
        p["fig12-4targets"] = {
            "four close targets at sigma_tilde = 0.2: local maxima counts for epsilon = 0.01 and 0.001",
            {{"name", "fig12-4targets"},
             {"kind", "separation"},
             {"acquisition", flat_acquisition()},
             {"scene", four},
             {"perturbation", medium(0.2)},
             {"realizations", 100},
             {"imaging", {{"functionals", {"cint", "inverse_f"}},
                          {"epsilon", 0.001},
                          {"grid", grid(0, 0, 3 * kLambda, 3 * kLambda, 31, 31)}}},
             {"analysis", {{"epsilons", {0.01, 0.001}}, {"separation_cells", 1}}}}};
        return p;
    }();
    return presets;
}

} // namespace

std::vector<std::string> preset_names()
{
    // Figure order rather than alphabetical order.
    return {"fig3",           "fig4-epsilon-sweep", "fig4-bandwidth-sweep", "fig5-aperture-sweep",
            "fig5-range-sweep", "fig6-reflectivity", "fig7-snr-error",      "fig8-3targets",
            "fig8-snr-spectra", "fig9-random-medium", "fig10-stability",    "fig11-cint-compare",
            "fig12-4targets"};
}

Json preset_json(const std::string &name)
{
    const auto &r = registry();
    const auto it = r.find(name);
    if (it == r.end())
        throw ConfigError("preset", "unknown preset '" + name + "'");
    Json j = it->second.config;
    j["preset"] = name;
    return j;
}

std::string preset_description(const std::string &name)
{
    const auto &r = registry();
    const auto it = r.find(name);
    if (it == r.end())
        throw ConfigError("preset", "unknown preset '" + name + "'");
    return it->second.description;
}

} // namespace sarsub
