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
#include <cstdio>
#include <set>

namespace sarsub {

const char *to_string(ExperimentKind kind) noexcept
{
    switch (kind) {
    case ExperimentKind::image: return "image";
    case ExperimentKind::resolution_sweep: return "resolution_sweep";
    case ExperimentKind::reflectivity_error: return "reflectivity_error";
    case ExperimentKind::stability: return "stability";
    case ExperimentKind::separation: return "separation";
    }
    return "?";
}

namespace {

std::string join(const std::string &path, const std::string &key)
{
    return path.empty() ? key : path + "." + key;
}

// View of one JSON object that remembers which keys were read, so that
// typos surface as errors instead of silently falling back to defaults.
class Section {
public:
    Section(const Json &j, std::string path) : j_(j), path_(std::move(path))
    {
        if (!j_.is_object())
            throw ConfigError(path_.empty() ? "config" : path_, "must be an object");
    }

    bool has(const std::string &key) const { return j_.contains(key) && !j_.at(key).is_null(); }

    const Json &at(const std::string &key)
    {
        used_.insert(key);
        return j_.at(key);
    }

    void mark(const std::string &k) { used_.insert(k); }

    std::string key(const std::string &k) const { return join(path_, k); }

    double number(const std::string &k, double def)
    {
        used_.insert(k);
        if (!has(k))
            return def;
        return as_number(j_.at(k), key(k));
    }

    std::optional<double> optional_number(const std::string &k)
    {
        used_.insert(k);
        if (!has(k))
            return std::nullopt;
        return as_number(j_.at(k), key(k));
    }

    int integer(const std::string &k, int def)
    {
        used_.insert(k);
        if (!has(k))
            return def;
        const auto &v = j_.at(k);
        if (!v.is_number_integer())
            throw ConfigError(key(k), "must be an integer");
        const auto x = v.get<long long>();
        if (x < -1000000000LL || x > 1000000000LL)
            throw ConfigError(key(k), "out of range");
        return static_cast<int>(x);
    }

    std::uint64_t unsigned64(const std::string &k, std::uint64_t def)
    {
        used_.insert(k);
        if (!has(k))
            return def;
        const auto &v = j_.at(k);
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
            throw ConfigError(key(k), "must be a non-negative integer");
        return v.get<std::uint64_t>();
    }

    std::string string(const std::string &k, const std::string &def)
    {
        used_.insert(k);
        if (!has(k))
            return def;
        const auto &v = j_.at(k);
        if (!v.is_string())
            throw ConfigError(key(k), "must be a string");
        return v.get<std::string>();
    }

    bool boolean(const std::string &k, bool def)
    {
        used_.insert(k);
        if (!has(k))
            return def;
        const auto &v = j_.at(k);
        if (!v.is_boolean())
            throw ConfigError(key(k), "must be true or false");
        return v.get<bool>();
    }

    Vec2 pair(const std::string &k, const Vec2 &def)
    {
        used_.insert(k);
        if (!has(k))
            return def;
        const auto &v = j_.at(k);
        if (!v.is_array() || v.size() != 2)
            throw ConfigError(key(k), "must be a two-element array");
        return Vec2(as_number(v[0], key(k) + "[0]"), as_number(v[1], key(k) + "[1]"));
    }

    std::vector<double> numbers(const std::string &k)
    {
        used_.insert(k);
        if (!has(k))
            return {};
        const auto &v = j_.at(k);
        if (v.is_number())
            return {as_number(v, key(k))};
        if (!v.is_array())
            throw ConfigError(key(k), "must be a number or an array of numbers");
        std::vector<double> out;
        for (std::size_t i = 0; i < v.size(); ++i)
            out.push_back(as_number(v[i], key(k) + "[" + std::to_string(i) + "]"));
        return out;
    }

    void done() const
    {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!used_.count(it.key()))
                throw ConfigError(key(it.key()), "unknown key");
    }

    static double as_number(const Json &v, const std::string &key)
    {
        if (v.is_number())
            return v.get<double>();
        if (v.is_string()) {
            const auto s = v.get<std::string>();
            if (s == "inf")
                return std::numeric_limits<double>::infinity();
        }
        throw ConfigError(key, "must be a number");
    }

private:
    const Json &j_;
    std::string path_;
    std::set<std::string> used_;
};

ExperimentKind kind_from_string(const std::string &s, const std::string &key)
{
    for (auto k : {ExperimentKind::image, ExperimentKind::resolution_sweep, ExperimentKind::reflectivity_error,
                   ExperimentKind::stability, ExperimentKind::separation})
        if (s == to_string(k))
            return k;
    throw ConfigError(key, "unknown experiment kind '" + s + "'");
}

PerturbationModel model_from_string(const std::string &s, const std::string &key)
{
    for (auto m : {PerturbationModel::none, PerturbationModel::direct, PerturbationModel::random_medium})
        if (s == to_string(m))
            return m;
    throw ConfigError(key, "unknown perturbation model '" + s + "'");
}

const char *to_string(NoiseConvention c)
{
    return c == NoiseConvention::amplitude ? "amplitude" : "power";
}

const char *to_string(SignalWeighting w)
{
    return w == SignalWeighting::pseudo_inverse ? "pseudo_inverse" : "as_published";
}

// Rebuilds the geometry so that acquisition errors carry the section prefix.
AcquisitionGeometry checked_geometry(const AcquisitionConfig &c, const std::string &context)
{
    try {
        return AcquisitionGeometry::build(c);
    } catch (const ConfigError &e) {
        throw ConfigError(join(context, e.key()), std::string(e.what()).substr(e.key().size() + 2));
    }
}

void read_acquisition(Section s, AcquisitionConfig &c)
{
    c.wave_speed_c = s.number("wave_speed_c", c.wave_speed_c);
    c.center_frequency_f0 = s.number("center_frequency_f0", c.center_frequency_f0);
    c.bandwidth_B = s.number("bandwidth_B", c.bandwidth_B);
    c.num_freq_M = s.integer("num_freq_M", c.num_freq_M);
    c.num_positions_N = s.integer("num_positions_N", c.num_positions_N);
    c.aperture_a = s.number("aperture_a", c.aperture_a);
    c.range_offset_R = s.number("range_offset_R", c.range_offset_R);
    c.height_H = s.number("height_H", c.height_H);
    s.done();
}

Scene read_scene(const Json &j)
{
    if (!j.is_array() || j.empty())
        throw ConfigError("scene", "must be a non-empty array of targets");
    Scene scene;
    for (std::size_t i = 0; i < j.size(); ++i) {
        Section t(j[i], "scene[" + std::to_string(i) + "]");
        PointTarget p;
        p.position = Vec3(t.number("x", 0.0), t.number("y", 0.0), t.number("z", 0.0));
        if (!p.position.allFinite())
            throw ConfigError(t.key("x"), "target position must be finite");
        const Vec2 rho = t.pair("rho", Vec2(1.0, 0.0));
        p.reflectivity = Complex(rho.x(), rho.y());
        if (!std::isfinite(rho.x()) || !std::isfinite(rho.y()))
            throw ConfigError(t.key("rho"), "must be finite");
        t.done();
        scene.push_back(p);
    }
    return scene;
}

std::vector<SweepConfig> read_sweeps(const Json &j)
{
    std::vector<SweepConfig> out;
    if (j.is_null())
        return out;
    const Json list = j.is_array() ? j : Json::array({j});
    for (std::size_t i = 0; i < list.size(); ++i) {
        Section s(list[i], j.is_array() ? "sweep[" + std::to_string(i) + "]" : "sweep");
        SweepConfig sw;
        sw.variable = s.string("variable", "");
        const auto &vars = sweep_variables();
        if (std::find(vars.begin(), vars.end(), sw.variable) == vars.end())
            throw ConfigError(s.key("variable"), "unknown sweep variable '" + sw.variable + "'");
        sw.values = s.numbers("values");
        if (sw.values.empty())
            throw ConfigError(s.key("values"), "must not be empty");
        for (double v : sw.values)
            if (std::isnan(v))
                throw ConfigError(s.key("values"), "must not contain NaN");
        s.done();
        out.push_back(std::move(sw));
    }
    return out;
}

Vec3 centroid(const Scene &scene)
{
    Vec3 c = Vec3::Zero();
    for (const auto &t : scene)
        c += t.position;
    return c / static_cast<double>(scene.size());
}

Json number_json(double x)
{
    if (std::isfinite(x))
        return x;
    return format_double(x);
}

} // namespace

const std::vector<std::string> &sweep_variables()
{
    static const std::vector<std::string> vars{"epsilon",     "tau_gap",      "snr_db",
                                               "sigma_tilde", "sigma",        "direct_sigma",
                                               "bandwidth_B", "aperture_a",   "range_offset_R",
                                               "height_H",    "center_frequency_f0", "range_offset_R_fixed_L"};
    return vars;
}

ExperimentConfig with_sweep_value(const ExperimentConfig &config, const std::string &variable, double value)
{
    ExperimentConfig c = config;
    auto &a = c.acquisition;
    if (variable == "epsilon")
        c.imaging.epsilon = value;
    else if (variable == "tau_gap")
        c.imaging.tau_gap = value;
    else if (variable == "snr_db")
        c.noise.snr_db = value;
    else if (variable == "sigma_tilde") {
        c.perturbation.medium.sigma_tilde = value;
        c.perturbation.medium.sigma.reset();
    } else if (variable == "sigma") {
        c.perturbation.medium.sigma = value;
        c.perturbation.medium.sigma_tilde.reset();
    } else if (variable == "direct_sigma")
        c.perturbation.direct_sigma = {value};
    else if (variable == "bandwidth_B")
        a.bandwidth_B = value;
    else if (variable == "aperture_a")
        a.aperture_a = value;
    else if (variable == "range_offset_R")
        a.range_offset_R = value;
    else if (variable == "height_H")
        a.height_H = value;
    else if (variable == "center_frequency_f0")
        a.center_frequency_f0 = value;
    else if (variable == "range_offset_R_fixed_L") {
        // Rotate the look direction: R changes, H follows so that L is unchanged.
        const double L = std::hypot(a.range_offset_R, a.height_H);
        if (!(value >= 0.0 && value <= L))
            throw ConfigError("sweep.values", "range offset must lie in [0, L]");
        a.range_offset_R = value;
        a.height_H = std::sqrt(std::max(0.0, (L - value) * (L + value)));
    } else
        throw ConfigError("sweep.variable", "unknown sweep variable '" + variable + "'");
    return c;
}

ExperimentConfig parse_config(const Json &j)
{
    Section root(j, "");
    ExperimentConfig c;
    c.name = root.string("name", c.name);
    c.preset = root.string("preset", "");
    c.kind = kind_from_string(root.string("kind", "image"), "kind");
    c.seed = root.unsigned64("seed", c.seed);
    c.realizations = root.integer("realizations", c.realizations);
    if (c.realizations < 1)
        throw ConfigError("realizations", "must be at least 1");
    c.threads = root.integer("threads", c.threads);
    if (c.threads < 1 || c.threads > 256)
        throw ConfigError("threads", "must lie in [1, 256]");
    c.output_dir = root.string("output_dir", "");

    if (root.has("acquisition"))
        read_acquisition(Section(root.at("acquisition"), "acquisition"), c.acquisition);
    const auto geom = checked_geometry(c.acquisition, "acquisition");

    if (!root.has("scene"))
        throw ConfigError("scene", "is required");
    c.scene = read_scene(root.at("scene"));

    if (root.has("noise")) {
        Section s(root.at("noise"), "noise");
        c.noise.snr_db = s.number("snr_db", kNoNoise);
        if (std::isnan(c.noise.snr_db))
            throw ConfigError("noise.snr_db", "must not be NaN");
        const auto conv = s.string("convention", "amplitude");
        if (conv == "amplitude")
            c.noise.convention = NoiseConvention::amplitude;
        else if (conv == "power")
            c.noise.convention = NoiseConvention::power;
        else
            throw ConfigError("noise.convention", "must be 'amplitude' or 'power'");
        s.done();
    }

    if (root.has("perturbation")) {
        Section s(root.at("perturbation"), "perturbation");
        auto &p = c.perturbation;
        p.model = model_from_string(s.string("model", "none"), "perturbation.model");
        p.direct_sigma = s.numbers("direct_sigma");
        if (s.has("medium")) {
            Section m(s.at("medium"), "perturbation.medium");
            p.medium.ell = m.number("ell", 0.0);
            p.medium.sigma = m.optional_number("sigma");
            p.medium.sigma_tilde = m.optional_number("sigma_tilde");
            p.medium.field_grid_resolution = m.number("field_grid_resolution", 0.0);
            p.medium.integral_step = m.number("integral_step", 0.0);
            p.medium.margin = m.number("margin", 0.0);
            m.done();
        }
        s.mark("medium");
        s.done();
        if (p.model == PerturbationModel::direct) {
            const auto n = p.direct_sigma.size();
            if (n != 1 && n != static_cast<std::size_t>(geom.num_positions()))
                throw ConfigError("perturbation.direct_sigma", "needs one value or one per position");
            for (double v : p.direct_sigma)
                if (!(v >= 0.0) || !std::isfinite(v))
                    throw ConfigError("perturbation.direct_sigma", "must be non-negative and finite");
        }
        if (p.model == PerturbationModel::random_medium) {
            if (!(p.medium.ell > 0.0))
                throw ConfigError("perturbation.medium.ell", "must be positive");
            if (p.medium.sigma.has_value() == p.medium.sigma_tilde.has_value())
                throw ConfigError("perturbation.medium.sigma", "give exactly one of sigma and sigma_tilde");
            const double s0 = p.medium.sigma ? *p.medium.sigma : *p.medium.sigma_tilde;
            if (!(s0 >= 0.0) || !std::isfinite(s0))
                throw ConfigError("perturbation.medium.sigma", "must be non-negative and finite");
            if (p.medium.field_grid_resolution < 0.0 || p.medium.integral_step < 0.0 || p.medium.margin < 0.0)
                throw ConfigError("perturbation.medium", "resolutions and margin must be non-negative");
        }
    }

    if (root.has("imaging")) {
        Section s(root.at("imaging"), "imaging");
        auto &im = c.imaging;
        if (s.has("functionals")) {
            const auto &f = s.at("functionals");
            if (!f.is_array() || f.empty())
                throw ConfigError("imaging.functionals", "must be a non-empty array");
            im.functionals.clear();
            for (const auto &name : f) {
                if (!name.is_string())
                    throw ConfigError("imaging.functionals", "entries must be strings");
                try {
                    im.functionals.push_back(functional_from_string(name.get<std::string>()));
                } catch (const ConfigError &) {
                    throw ConfigError("imaging.functionals", "unknown functional '" + name.get<std::string>() + "'");
                }
            }
        }
        im.epsilon = s.number("epsilon", im.epsilon);
        if (!(im.epsilon > 0.0) || !std::isfinite(im.epsilon))
            throw ConfigError("imaging.epsilon", "must be positive");
        im.tau_gap = s.number("tau_gap", im.tau_gap);
        if (!(im.tau_gap > 0.0 && im.tau_gap < 1.0))
            throw ConfigError("imaging.tau_gap", "must lie in (0, 1)");
        if (s.has("rank_override")) {
            im.rank_override = s.integer("rank_override", 0);
            if (*im.rank_override < 0 || *im.rank_override > geom.num_freq_M())
                throw ConfigError("imaging.rank_override", "must lie in [0, M]");
        } else {
            s.mark("rank_override");
        }
        const auto w = s.string("weighting", "pseudo_inverse");
        if (w == "pseudo_inverse")
            im.weighting = SignalWeighting::pseudo_inverse;
        else if (w == "as_published")
            im.weighting = SignalWeighting::as_published;
        else
            throw ConfigError("imaging.weighting", "must be 'pseudo_inverse' or 'as_published'");
        im.x_d = s.optional_number("x_d");
        im.omega_d = s.optional_number("omega_d");
        if (im.x_d && !(*im.x_d > 0.0))
            throw ConfigError("imaging.x_d", "must be positive");
        if (im.omega_d && !(*im.omega_d > 0.0))
            throw ConfigError("imaging.omega_d", "must be positive");
        if (s.has("grid")) {
            Section g(s.at("grid"), "imaging.grid");
            im.grid_center_given = g.has("center");
            const Vec2 c0 = g.pair("center", Vec2::Zero());
            im.grid.center = c0;
            im.grid.extent = g.pair("extent", im.grid.extent);
            const Vec2 n = g.pair("n", Vec2(51, 51));
            if (n.x() != std::floor(n.x()) || n.y() != std::floor(n.y()) || n.x() < 1 || n.y() < 1 ||
                n.x() > 100000 || n.y() > 100000)
                throw ConfigError("imaging.grid.n", "must be two positive integers");
            im.grid.nx = static_cast<int>(n.x());
            im.grid.ny = static_cast<int>(n.y());
            g.done();
        } else {
            im.grid.nx = im.grid.ny = 51;
        }
        s.mark("grid");
        s.mark("functionals");
        s.done();
    } else {
        c.imaging.grid.nx = c.imaging.grid.ny = 51;
    }
    if (!c.imaging.grid_center_given) {
        const Vec3 ctr = centroid(c.scene);
        c.imaging.grid.center = Vec2(ctr.x(), ctr.y());
        c.imaging.grid_center_given = true;
    }
    try {
        c.imaging.grid.validate();
    } catch (const ConfigError &e) {
        throw ConfigError("imaging." + e.key(), std::string(e.what()).substr(e.key().size() + 2));
    }

    if (root.has("sweep") && root.has("sweeps"))
        throw ConfigError("sweeps", "give either 'sweep' or 'sweeps'");
    if (root.has("sweep"))
        c.sweeps = read_sweeps(root.at("sweep"));
    if (root.has("sweeps"))
        c.sweeps = read_sweeps(root.at("sweeps"));

    if (root.has("analysis")) {
        Section s(root.at("analysis"), "analysis");
        auto &an = c.analysis;
        an.slices = s.boolean("slices", an.slices);
        an.slice_half_length = s.pair("slice_half_length", an.slice_half_length);
        an.slice_samples = s.integer("slice_samples", an.slice_samples);
        an.two_stage = s.boolean("two_stage", an.two_stage);
        an.two_stage_window = s.pair("two_stage_window", an.two_stage_window);
        an.two_stage_samples = s.integer("two_stage_samples", an.two_stage_samples);
        an.spectra = s.boolean("spectra", an.spectra);
        an.epsilons = s.numbers("epsilons");
        an.snr_window = s.integer("snr_window", an.snr_window);
        an.separation_cells = s.integer("separation_cells", an.separation_cells);
        an.save_images = s.boolean("save_images", an.save_images);
        an.save_cubes = s.boolean("save_cubes", an.save_cubes);
        s.done();
        if (an.slice_samples < 3 || an.slice_samples % 2 == 0)
            throw ConfigError("analysis.slice_samples", "must be odd and at least 3");
        if (!(an.slice_half_length.x() > 0.0 && an.slice_half_length.y() > 0.0))
            throw ConfigError("analysis.slice_half_length", "must be positive");
        if (an.two_stage_samples < 3 || an.two_stage_samples % 2 == 0)
            throw ConfigError("analysis.two_stage_samples", "must be odd and at least 3");
        if (!(an.two_stage_window.x() > 0.0 && an.two_stage_window.y() > 0.0))
            throw ConfigError("analysis.two_stage_window", "must be positive");
        if (an.snr_window < 1 || an.snr_window % 2 == 0)
            throw ConfigError("analysis.snr_window", "must be a positive odd integer");
        if (an.separation_cells < 0)
            throw ConfigError("analysis.separation_cells", "must be non-negative");
        for (double e : an.epsilons)
            if (!(e > 0.0) || !std::isfinite(e))
                throw ConfigError("analysis.epsilons", "must be positive");
    }
    for (const char *k : {"acquisition", "scene", "noise", "perturbation", "imaging", "sweep", "sweeps", "analysis"})
        root.mark(k);
    root.done();

    // Kind-specific requirements.
    switch (c.kind) {
    case ExperimentKind::resolution_sweep: {
        if (c.sweeps.empty())
            throw ConfigError("sweep", "resolution_sweep needs a sweep");
        static const std::set<std::string> ok{"epsilon", "bandwidth_B", "aperture_a", "range_offset_R",
                                              "range_offset_R_fixed_L", "height_H", "center_frequency_f0"};
        for (const auto &sw : c.sweeps) {
            if (!ok.count(sw.variable))
                throw ConfigError("sweep.variable", "'" + sw.variable + "' is not a resolution parameter");
            if (sw.values.size() < 3)
                throw ConfigError("sweep.values", "a log-log fit needs at least 3 values");
        }
        break;
    }
    case ExperimentKind::reflectivity_error:
    case ExperimentKind::separation:
        if (c.analysis.epsilons.empty())
            c.analysis.epsilons = {c.imaging.epsilon};
        break;
    case ExperimentKind::stability:
        if (c.realizations < 2)
            throw ConfigError("realizations", "stability needs at least 2 realizations");
        break;
    case ExperimentKind::image: break;
    }

    // Every sweep value must describe a valid configuration.
    for (const auto &sw : c.sweeps)
        for (double v : sw.values) {
            const auto cv = with_sweep_value(c, sw.variable, v);
            checked_geometry(cv.acquisition, "sweep.values");
            if (!(cv.imaging.epsilon > 0.0) || !(cv.imaging.tau_gap > 0.0 && cv.imaging.tau_gap < 1.0))
                throw ConfigError("sweep.values", "imaging parameters out of range");
            const auto &m = cv.perturbation.medium;
            if ((m.sigma && !(*m.sigma >= 0.0)) || (m.sigma_tilde && !(*m.sigma_tilde >= 0.0)))
                throw ConfigError("sweep.values", "medium strength must be non-negative");
            for (double d : cv.perturbation.direct_sigma)
                if (!(d >= 0.0))
                    throw ConfigError("sweep.values", "travel-time std must be non-negative");
        }
    for (const auto &sw : c.sweeps)
        if ((sw.variable == "sigma_tilde" || sw.variable == "sigma") &&
            c.perturbation.model != PerturbationModel::random_medium)
            throw ConfigError("sweep.variable", "medium strength sweep needs perturbation.model = random_medium");
        else if (sw.variable == "direct_sigma" && c.perturbation.model != PerturbationModel::direct)
            throw ConfigError("sweep.variable", "direct_sigma sweep needs perturbation.model = direct");
    return c;
}

namespace {

Json sweep_json(const SweepConfig &s)
{
    Json j;
    j["variable"] = s.variable;
    j["values"] = Json::array();
    for (double v : s.values)
        j["values"].push_back(number_json(v));
    return j;
}

} // namespace

Json to_json(const ExperimentConfig &c)
{
    Json j;
    j["name"] = c.name;
    j["preset"] = c.preset;
    j["kind"] = to_string(c.kind);
    j["seed"] = c.seed;
    j["realizations"] = c.realizations;
    j["threads"] = c.threads;
    j["output_dir"] = c.output_dir;
    j["acquisition"] = to_json(c.acquisition);
    j["scene"] = Json::array();
    for (const auto &t : c.scene)
        j["scene"].push_back({{"x", t.position.x()},
                              {"y", t.position.y()},
                              {"z", t.position.z()},
                              {"rho", {t.reflectivity.real(), t.reflectivity.imag()}}});
    j["noise"] = {{"snr_db", number_json(c.noise.snr_db)}, {"convention", to_string(c.noise.convention)}};

    Json p;
    p["model"] = to_string(c.perturbation.model);
    p["direct_sigma"] = c.perturbation.direct_sigma;
    const auto &m = c.perturbation.medium;
    Json mj;
    mj["ell"] = m.ell;
    mj["sigma"] = m.sigma ? Json(*m.sigma) : Json();
    mj["sigma_tilde"] = m.sigma_tilde ? Json(*m.sigma_tilde) : Json();
    mj["field_grid_resolution"] = m.field_grid_resolution;
    mj["integral_step"] = m.integral_step;
    mj["margin"] = m.margin;
    p["medium"] = mj;
    j["perturbation"] = p;

    const auto &im = c.imaging;
    Json ij;
    ij["functionals"] = Json::array();
    for (auto f : im.functionals)
        ij["functionals"].push_back(to_string(f));
    ij["epsilon"] = im.epsilon;
    ij["tau_gap"] = im.tau_gap;
    ij["rank_override"] = im.rank_override ? Json(*im.rank_override) : Json();
    ij["weighting"] = to_string(im.weighting);
    ij["x_d"] = im.x_d ? Json(*im.x_d) : Json();
    ij["omega_d"] = im.omega_d ? Json(*im.omega_d) : Json();
    ij["grid"] = {{"center", {im.grid.center.x(), im.grid.center.y()}},
                  {"extent", {im.grid.extent.x(), im.grid.extent.y()}},
                  {"n", {im.grid.nx, im.grid.ny}}};
    j["imaging"] = ij;

    j["sweeps"] = Json::array();
    for (const auto &sw : c.sweeps)
        j["sweeps"].push_back(sweep_json(sw));

    const auto &an = c.analysis;
    j["analysis"] = {{"slices", an.slices},
                     {"slice_half_length", {an.slice_half_length.x(), an.slice_half_length.y()}},
                     {"slice_samples", an.slice_samples},
                     {"two_stage", an.two_stage},
                     {"two_stage_window", {an.two_stage_window.x(), an.two_stage_window.y()}},
                     {"two_stage_samples", an.two_stage_samples},
                     {"spectra", an.spectra},
                     {"epsilons", an.epsilons},
                     {"snr_window", an.snr_window},
                     {"separation_cells", an.separation_cells},
                     {"save_images", an.save_images},
                     {"save_cubes", an.save_cubes}};
    return j;
}

Json merge_json(Json base, const Json &patch)
{
    if (!base.is_object() || !patch.is_object())
        return patch;
    for (auto it = patch.begin(); it != patch.end(); ++it) {
        if (base.contains(it.key()))
            base[it.key()] = merge_json(base[it.key()], it.value());
        else
            base[it.key()] = it.value();
    }
    return base;
}

std::string config_hash(const ExperimentConfig &config)
{
    Json j = to_json(config);
    j.erase("threads");
    j.erase("output_dir");
    const std::string text = j.dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace sarsub
