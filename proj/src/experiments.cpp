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

#include "sarsub/experiments.hpp"

#include "sarsub/analysis.hpp"
#include "sarsub/errors.hpp"
#include "sarsub/parallel.hpp"
#include "sarsub/prony.hpp"
#include "sarsub/rng.hpp"

#include <cmath>
#include <ostream>

#ifndef SARSUB_VERSION
#define SARSUB_VERSION "0.0.0"
#endif

namespace sarsub {

std::string code_version()
{
    return SARSUB_VERSION;
}

RandomMediumSpec medium_spec(const ExperimentConfig &config, const AcquisitionGeometry &geom)
{
    const auto &m = config.perturbation.medium;
    RandomMediumSpec spec;
    spec.correlation_length_ell = m.ell;
    spec.background_speed_c0 = geom.wave_speed();
    spec.field_grid_resolution = m.field_grid_resolution > 0.0 ? m.field_grid_resolution : m.ell / 5.0;
    spec.integral_step = m.integral_step > 0.0 ? m.integral_step : m.ell / 10.0;
    if (m.sigma_tilde) {
        const double sigma0 = geom.wavelength() / std::sqrt(m.ell * geom.distance_L());
        spec.fluctuation_strength_sigma = *m.sigma_tilde * sigma0;
    } else {
        spec.fluctuation_strength_sigma = m.sigma.value_or(0.0);
    }
    spec.validate();
    return spec;
}

BoundingBox medium_domain(const ExperimentConfig &config, const AcquisitionGeometry &geom)
{
    std::vector<Vec3> targets;
    for (const auto &t : config.scene)
        targets.push_back(t.position);
    const auto &m = config.perturbation.medium;
    return BoundingBox::enclosing(geom.positions(), targets, m.margin > 0.0 ? m.margin : m.ell);
}

DataCube synthesize(const ExperimentConfig &config, const AcquisitionGeometry &geom, int realization)
{
    const auto r = static_cast<std::uint64_t>(realization);
    const auto noise_seed = derive_seed(config.seed, Stream::noise, r);
    std::uint64_t medium_seed = 0;

    TravelTimePerturbation pert;
    switch (config.perturbation.model) {
    case PerturbationModel::none: break;
    case PerturbationModel::direct: {
        std::vector<double> sigmas = config.perturbation.direct_sigma;
        if (sigmas.size() == 1)
            sigmas.assign(static_cast<std::size_t>(geom.num_positions()), sigmas.front());
        medium_seed = derive_seed(config.seed, Stream::direct, r);
        pert = sample_direct_perturbations(sigmas, medium_seed);
        break;
    }
    case PerturbationModel::random_medium: {
        const auto spec = medium_spec(config, geom);
        medium_seed = derive_seed(config.seed, Stream::medium, r);
        if (spec.fluctuation_strength_sigma > 0.0) {
            const auto field = sample_random_medium(spec, medium_domain(config, geom), medium_seed);
            pert = medium_perturbations(field, spec, geom, config.scene);
        } else {
            pert.model = PerturbationModel::random_medium;
        }
        break;
    }
    }

    DataCube cube = simulate_born(config.scene, geom, pert);
    cube.provenance.medium_seed = medium_seed;
    if (std::isfinite(config.noise.snr_db))
        cube = add_noise(cube, config.noise.snr_db, noise_seed, config.noise.convention);
    return cube;
}

namespace {

double default_x_d(const ExperimentConfig &c, const AcquisitionGeometry &g)
{
    return c.imaging.x_d.value_or(g.aperture() / 6.0);
}

double default_omega_d(const ExperimentConfig &c, const AcquisitionGeometry &g)
{
    return c.imaging.omega_d.value_or(g.bandwidth() / 2.0);
}

bool needs_subspace(Functional f)
{
    return f == Functional::inverse_f || f == Functional::inverse_r;
}

void require_subspace(const BlockSVD *svd, const RegularizedSpectrum *spectrum)
{
    if (!svd || !spectrum)
        throw std::logic_error("subspace functional evaluated without an SVD");
}

} // namespace

Complex functional_value(Functional f, const Vec3 &y, const ExperimentConfig &config, const DataCube &cube,
                         const BlockSVD *svd, const RegularizedSpectrum *spectrum)
{
    const auto &g = cube.geometry;
    switch (f) {
    case Functional::inverse_f:
        require_subspace(svd, spectrum);
        return 1.0 / f_epsilon(y, *svd, *spectrum, g);
    case Functional::inverse_r:
        require_subspace(svd, spectrum);
        return 1.0 / r_epsilon(y, *svd, *spectrum, g);
    case Functional::sar: return sar_value(cube, y);
    case Functional::sar_abs: return std::abs(sar_value(cube, y));
    case Functional::cint: return cint_value(cube, y, default_x_d(config, g), default_omega_d(config, g));
    }
    return {};
}

ImageGrid functional_image(Functional f, const GridSpec &grid, const ExperimentConfig &config,
                           const DataCube &cube, const BlockSVD *svd, const RegularizedSpectrum *spectrum,
                           int realization, int threads)
{
    const auto &g = cube.geometry;
    ImageMetadata meta;
    meta.functional = f;
    if (needs_subspace(f)) {
        require_subspace(svd, spectrum);
        meta.epsilon = spectrum->epsilon;
        meta.tau_gap = spectrum->tau_gap;
    }
    if (f == Functional::cint) {
        meta.x_d = default_x_d(config, g);
        meta.omega_d = default_omega_d(config, g);
    }
    meta.noise_seed = cube.provenance.noise_seed;
    meta.medium_seed = cube.provenance.medium_seed;
    meta.realization = realization;
    meta.k0 = g.k0();
    meta.geometry_hash = g.hash();
    const bool complex_valued = f == Functional::sar || f == Functional::inverse_r;
    return evaluate_grid(
        grid, [&](const Vec3 &y) { return functional_value(f, y, config, cube, svd, spectrum); }, complex_valued,
        meta, threads);
}

namespace {

// One value of one sweep, or the unswept base configuration.
struct Variant {
    std::string variable; // empty when unswept
    std::size_t index = 0;
    double value = std::numeric_limits<double>::quiet_NaN();
    ExperimentConfig config;

    std::string suffix() const { return variable.empty() ? "" : "_" + variable + "_" + std::to_string(index); }
};

std::vector<Variant> variants(const ExperimentConfig &c)
{
    std::vector<Variant> out;
    if (c.sweeps.empty()) {
        out.push_back({"", 0, std::numeric_limits<double>::quiet_NaN(), c});
        return out;
    }
    for (const auto &sw : c.sweeps)
        for (std::size_t i = 0; i < sw.values.size(); ++i)
            out.push_back({sw.variable, i, sw.values[i], with_sweep_value(c, sw.variable, sw.values[i])});
    return out;
}

std::string realization_suffix(const ExperimentConfig &c, int r)
{
    return c.realizations > 1 ? "_r" + std::to_string(r) : "";
}

class Output {
public:
    Output(const ExperimentConfig &config, std::filesystem::path dir) : dir_(std::move(dir))
    {
        result_.config_hash = config_hash(config);
        common_ = {{"preset", config.preset},
                   {"name", config.name},
                   {"kind", to_string(config.kind)},
                   {"config_hash", result_.config_hash},
                   {"code_version", code_version()},
                   {"seed", config.seed}};
        std::error_code ec;
        std::filesystem::create_directories(dir_, ec);
        if (ec || !std::filesystem::is_directory(dir_))
            throw IoError("cannot create output directory '" + dir_.string() + "'");
    }

    void table(const std::string &name, const CsvTable &t, const Json &extra = Json::object())
    {
        write_csv(dir_ / name, t);
        Json side = common_;
        side["file"] = name;
        side["columns"] = t.columns;
        for (auto it = extra.begin(); it != extra.end(); ++it)
            side[it.key()] = it.value();
        write_json(sidecar_path(dir_ / name), side);
        result_.files.emplace_back(name);
        result_.files.emplace_back(name + ".json");
    }

    void json(const std::string &name, const Json &value)
    {
        write_json(dir_ / name, value);
        result_.files.emplace_back(name);
    }

    void cube(const std::string &name, const DataCube &c)
    {
        write_cube(dir_ / name, c);
        result_.files.emplace_back(name);
    }

    RunResult result() const { return result_; }

private:
    std::filesystem::path dir_;
    Json common_;
    RunResult result_;
};

Json variant_json(const Variant &v)
{
    Json j;
    j["sweep_variable"] = v.variable.empty() ? Json() : Json(v.variable);
    j["sweep_value"] = v.variable.empty() ? Json() : Json(v.value);
    return j;
}

void write_image(Output &out, const std::string &name, const ImageGrid &img, const Variant &v)
{
    Json extra = to_json(img.meta);
    const Json sweep = variant_json(v);
    for (auto it = sweep.begin(); it != sweep.end(); ++it)
        extra[it.key()] = it.value();
    extra["grid"] = {{"center", {img.grid.center.x(), img.grid.center.y()}},
                     {"extent", {img.grid.extent.x(), img.grid.extent.y()}},
                     {"n", {img.grid.nx, img.grid.ny}}};
    out.table(name, image_table(img), extra);
}

std::string value_cell(const Variant &v)
{
    return v.variable.empty() ? "" : cell(v.value);
}

bool any_subspace(const std::vector<Functional> &fs)
{
    for (auto f : fs)
        if (needs_subspace(f))
            return true;
    return false;
}

RegularizedSpectrum spectrum_for(const BlockSVD &svd, const ExperimentConfig &c, double epsilon)
{
    return regularize_spectrum(svd, epsilon, c.imaging.tau_gap, c.imaging.rank_override, c.imaging.weighting);
}

void log_line(std::ostream *log, const std::string &msg)
{
    if (log)
        *log << msg << '\n';
}

// ---------------------------------------------------------------------------

void run_image(const ExperimentConfig &config, Output &out, std::ostream *log)
{
    CsvTable peaks;
    peaks.columns = {"sweep_variable", "sweep_value", "realization", "functional", "peak_x", "peak_y", "peak_value"};
    CsvTable slices;
    slices.columns = {"sweep_variable", "sweep_value", "realization", "target", "functional",
                      "axis",           "offset",      "value_re",    "value_im"};
    CsvTable targets;
    targets.columns = {"sweep_variable", "sweep_value", "realization", "target",       "x",
                       "y",              "rho_re",      "rho_im",      "peak_x",       "peak_y",
                       "peak_value",     "recovered_re", "recovered_im", "rel_error"};
    CsvTable spectra;
    spectra.columns = {"sweep_variable", "sweep_value", "realization", "block", "index", "sigma",
                       "sigma_thresholded", "inverse", "signal"};

    const auto &an = config.analysis;
    for (const auto &v : variants(config)) {
        const auto &c = v.config;
        const auto geom = AcquisitionGeometry::build(c.acquisition);
        const bool subspace = any_subspace(c.imaging.functionals) || an.slices || an.two_stage || an.spectra;
        for (int r = 0; r < c.realizations; ++r) {
            log_line(log, "image" + v.suffix() + realization_suffix(c, r));
            const DataCube cube = synthesize(c, geom, r);
            const std::string tag = v.suffix() + realization_suffix(c, r);
            if (an.save_cubes)
                out.cube("cube" + tag + ".txt", cube);
            BlockSVD svd;
            RegularizedSpectrum spec;
            if (subspace) {
                svd = block_svd(assemble_blocks(cube), c.threads);
                spec = spectrum_for(svd, c, c.imaging.epsilon);
            }
            const BlockSVD *ps = subspace ? &svd : nullptr;
            const RegularizedSpectrum *pp = subspace ? &spec : nullptr;

            for (auto f : c.imaging.functionals) {
                const auto img = functional_image(f, c.imaging.grid, c, cube, ps, pp, r, c.threads);
                if (an.save_images)
                    write_image(out, std::string("image_") + to_string(f) + tag + ".csv", img, v);
                const auto pk = find_peak(img);
                peaks.add_row({v.variable, value_cell(v), cell(r), to_string(f), cell(pk.location.x()),
                               cell(pk.location.y()), cell(pk.value)});
            }

            if (an.slices) {
                for (std::size_t p = 0; p < c.scene.size(); ++p) {
                    const Vec3 y0 = c.scene[p].position;
                    for (auto f : {Functional::inverse_f, Functional::inverse_r})
                        for (auto axis : {Axis::cross_range, Axis::range}) {
                            const double h = axis == Axis::cross_range ? an.slice_half_length.x()
                                                                       : an.slice_half_length.y();
                            const int n = an.slice_samples;
                            for (int i = 0; i < n; ++i) {
                                const double off = -h + 2.0 * h * i / (n - 1);
                                Vec3 y = y0;
                                (axis == Axis::cross_range ? y.x() : y.y()) += off;
                                const Complex val = functional_value(f, y, c, cube, ps, pp);
                                slices.add_row({v.variable, value_cell(v), cell(r), cell(p), to_string(f),
                                                to_string(axis), cell(off), cell(val.real()), cell(val.imag())});
                            }
                        }
                }
            }

            if (an.two_stage) {
                for (std::size_t p = 0; p < c.scene.size(); ++p) {
                    const auto &t = c.scene[p];
                    GridSpec win;
                    win.center = Vec2(t.position.x(), t.position.y());
                    win.extent = an.two_stage_window;
                    win.nx = win.ny = an.two_stage_samples;
                    const auto img = functional_image(Functional::inverse_f, win, c, cube, ps, pp, r, c.threads);
                    const auto pk = find_peak(img);
                    const Complex rho_hat = 1.0 / r_epsilon(pk.location, svd, spec, geom);
                    targets.add_row({v.variable, value_cell(v), cell(r), cell(p), cell(t.position.x()),
                                     cell(t.position.y()), cell(t.reflectivity.real()), cell(t.reflectivity.imag()),
                                     cell(pk.location.x()), cell(pk.location.y()), cell(pk.value),
                                     cell(rho_hat.real()), cell(rho_hat.imag()),
                                     cell(reflectivity_error(rho_hat, t.reflectivity))});
                }
            }

            if (an.spectra) {
                const auto t = spectrum_table(svd, spec);
                for (const auto &row : t.rows) {
                    std::vector<std::string> full{v.variable, value_cell(v), cell(r)};
                    full.insert(full.end(), row.begin(), row.end());
                    spectra.add_row(std::move(full));
                }
            }
        }
    }
    out.table("peaks.csv", peaks);
    if (an.slices)
        out.table("slices.csv", slices);
    if (an.two_stage)
        out.table("targets.csv", targets, {{"window", {an.two_stage_window.x(), an.two_stage_window.y()}},
                                           {"samples", an.two_stage_samples}});
    if (an.spectra)
        out.table("spectrum.csv", spectra);
}

// ---------------------------------------------------------------------------

struct Abscissa {
    std::string name;
    double value;
};

Abscissa abscissa(const std::string &variable, const AcquisitionGeometry &g, double epsilon)
{
    if (variable == "epsilon")
        return {"epsilon", epsilon};
    if (variable == "bandwidth_B")
        return {"c/B", g.wave_speed() / g.bandwidth()};
    if (variable == "aperture_a")
        return {"L/a", g.distance_L() / g.aperture()};
    if (variable == "center_frequency_f0")
        return {"f0", g.center_frequency()};
    return {"L/R", g.distance_L() / g.range_offset()};
}

void run_resolution(const ExperimentConfig &config, Output &out, std::ostream *log)
{
    CsvTable rows;
    rows.columns = {"sweep_variable", "sweep_value", "abscissa_name", "abscissa",    "dx_full",    "dy_full",
                    "dx_half_pos",    "dx_half_neg", "dy_half_pos",   "dy_half_neg", "dx_theory",  "dy_theory",
                    "peak_value"};
    CsvTable fits;
    fits.columns = {"sweep_variable", "abscissa_name", "axis", "intercept", "slope"};

    std::vector<Variant> vs = variants(config);
    std::vector<ResolutionMeasurement> mx(vs.size()), my(vs.size());
    parallel_for(vs.size(), config.threads, [&](std::size_t i) {
        const auto &c = vs[i].config;
        const auto geom = AcquisitionGeometry::build(c.acquisition);
        const DataCube cube = synthesize(c, geom, 0);
        const auto svd = block_svd(assemble_blocks(cube));
        const auto spec = spectrum_for(svd, c, c.imaging.epsilon);
        const Vec3 y0 = c.scene.front().position;
        const auto image = [&](const Vec3 &y) { return 1.0 / f_epsilon(y, svd, spec, geom); };
        const Vec2 peak(y0.x(), y0.y());
        mx[i] = measure_resolution(image, peak, Axis::cross_range, cross_range_width_theory(geom, c.imaging.epsilon));
        my[i] = measure_resolution(image, peak, Axis::range, range_width_theory(geom, c.imaging.epsilon));
    });

    for (const auto &sw : config.sweeps) {
        std::vector<double> xs, dxs, dys;
        std::string name;
        for (std::size_t i = 0; i < vs.size(); ++i) {
            if (vs[i].variable != sw.variable)
                continue;
            const auto &c = vs[i].config;
            const auto geom = AcquisitionGeometry::build(c.acquisition);
            const auto ab = abscissa(sw.variable, geom, c.imaging.epsilon);
            name = ab.name;
            xs.push_back(ab.value);
            dxs.push_back(mx[i].full_width);
            dys.push_back(my[i].full_width);
            rows.add_row({sw.variable, cell(vs[i].value), ab.name, cell(ab.value), cell(mx[i].full_width),
                          cell(my[i].full_width), cell(mx[i].half_width), cell(mx[i].half_width_neg),
                          cell(my[i].half_width), cell(my[i].half_width_neg),
                          cell(cross_range_width_theory(geom, c.imaging.epsilon)),
                          cell(range_width_theory(geom, c.imaging.epsilon)), cell(mx[i].peak_value)});
        }
        const auto fx = loglog_fit(xs, dxs);
        const auto fy = loglog_fit(xs, dys);
        fits.add_row({sw.variable, name, "cross_range", cell(fx.intercept), cell(fx.slope)});
        fits.add_row({sw.variable, name, "range", cell(fy.intercept), cell(fy.slope)});
        log_line(log, "resolution sweep over " + sw.variable + ": slopes " + format_double(fx.slope) + ", " +
                          format_double(fy.slope));
    }
    const Json width = {{"width", "full width between the two half-maximum crossings"}};
    out.table("resolution.csv", rows, width);
    out.table("fit.csv", fits, {{"fit", "least squares on natural logs of full widths"}});
}

// ---------------------------------------------------------------------------

void run_reflectivity_error(const ExperimentConfig &config, Output &out, std::ostream *log)
{
    CsvTable rows;
    rows.columns = {"sweep_variable", "sweep_value", "epsilon", "realization", "target",
                    "rho_hat_re",     "rho_hat_im",  "rel_error"};
    CsvTable summary;
    summary.columns = {"sweep_variable", "sweep_value", "epsilon", "target", "mean_rel_error", "max_rel_error"};

    const auto &eps = config.analysis.epsilons;
    for (const auto &v : variants(config)) {
        const auto &c = v.config;
        const auto geom = AcquisitionGeometry::build(c.acquisition);
        log_line(log, "reflectivity error" + v.suffix());
        const auto R = static_cast<std::size_t>(c.realizations);
        const auto P = c.scene.size();
        // slot[r][e * P + p]
        std::vector<std::vector<Complex>> slot(R, std::vector<Complex>(eps.size() * P));
        parallel_for(R, c.threads, [&](std::size_t r) {
            const DataCube cube = synthesize(c, geom, static_cast<int>(r));
            const auto svd = block_svd(assemble_blocks(cube));
            for (std::size_t e = 0; e < eps.size(); ++e) {
                const auto spec = spectrum_for(svd, c, eps[e]);
                for (std::size_t p = 0; p < P; ++p)
                    slot[r][e * P + p] = 1.0 / r_epsilon(c.scene[p].position, svd, spec, geom);
            }
        });
        for (std::size_t e = 0; e < eps.size(); ++e)
            for (std::size_t p = 0; p < P; ++p) {
                double sum = 0.0, mx = 0.0;
                for (std::size_t r = 0; r < R; ++r) {
                    const Complex rho_hat = slot[r][e * P + p];
                    const double err = reflectivity_error(rho_hat, c.scene[p].reflectivity);
                    sum += err;
                    mx = std::max(mx, err);
                    rows.add_row({v.variable, value_cell(v), cell(eps[e]), cell(r), cell(p), cell(rho_hat.real()),
                                  cell(rho_hat.imag()), cell(err)});
                }
                summary.add_row({v.variable, value_cell(v), cell(eps[e]), cell(p),
                                 cell(sum / static_cast<double>(R)), cell(mx)});
            }
    }
    out.table("errors.csv", rows);
    out.table("error_summary.csv", summary);
}

// ---------------------------------------------------------------------------

// Grid indices of the node nearest to `p`.
std::pair<int, int> nearest_node(const GridSpec &g, const Vec3 &p)
{
    const auto index = [](double off, double spacing, int n) {
        if (n == 1)
            return 0;
        const long i = std::lround(off / spacing + 0.5 * (n - 1));
        return static_cast<int>(std::clamp<long>(i, 0, n - 1));
    };
    return {index(p.x() - g.center.x(), g.spacing_x(), g.nx), index(p.y() - g.center.y(), g.spacing_y(), g.ny)};
}

void run_stability(const ExperimentConfig &config, Output &out, std::ostream *log)
{
    CsvTable rows;
    rows.columns = {"sweep_variable", "sweep_value", "functional",   "image_snr",
                    "num_realizations", "window_nodes", "window_dx", "window_dy"};
    CsvTable per;
    per.columns = {"sweep_variable", "sweep_value", "realization", "functional", "center_re", "center_im"};

    const auto &fs = config.imaging.functionals;
    const int w = config.analysis.snr_window;
    for (const auto &v : variants(config)) {
        const auto &c = v.config;
        const auto geom = AcquisitionGeometry::build(c.acquisition);
        const auto &grid = c.imaging.grid;
        const auto [ix0, iy0] = nearest_node(grid, c.scene.front().position);
        if (ix0 - w / 2 < 0 || iy0 - w / 2 < 0 || ix0 + w / 2 >= grid.nx || iy0 + w / 2 >= grid.ny)
            throw ConfigError("analysis.snr_window", "window around the target leaves the imaging grid");
        GridSpec window;
        window.nx = window.ny = w;
        window.center = Vec2(grid.point(ix0, iy0).x(), grid.point(ix0, iy0).y());
        window.extent = Vec2(grid.spacing_x() * (w - 1), grid.spacing_y() * (w - 1));
        if (w == 1)
            window.extent = Vec2(grid.spacing_x(), grid.spacing_y());
        std::vector<Vec3> nodes;
        for (int iy = iy0 - w / 2; iy <= iy0 + w / 2; ++iy)
            for (int ix = ix0 - w / 2; ix <= ix0 + w / 2; ++ix)
                nodes.push_back(grid.point(ix, iy));

        log_line(log, "stability" + v.suffix() + ": " + std::to_string(c.realizations) + " realizations");
        const auto R = static_cast<std::size_t>(c.realizations);
        // values[f][r] = window values
        std::vector<std::vector<std::vector<Complex>>> values(
            fs.size(), std::vector<std::vector<Complex>>(R, std::vector<Complex>(nodes.size())));
        parallel_for(R, c.threads, [&](std::size_t r) {
            const DataCube cube = synthesize(c, geom, static_cast<int>(r));
            BlockSVD svd;
            RegularizedSpectrum spec;
            const bool subspace = any_subspace(fs);
            if (subspace) {
                svd = block_svd(assemble_blocks(cube));
                spec = spectrum_for(svd, c, c.imaging.epsilon);
            }
            for (std::size_t f = 0; f < fs.size(); ++f)
                for (std::size_t k = 0; k < nodes.size(); ++k)
                    values[f][r][k] = functional_value(fs[f], nodes[k], c, cube, subspace ? &svd : nullptr,
                                                       subspace ? &spec : nullptr);
        });

        for (std::size_t f = 0; f < fs.size(); ++f) {
            const auto rep = image_snr(values[f], window, to_string(fs[f]));
            rows.add_row({v.variable, value_cell(v), to_string(fs[f]), cell(rep.image_snr), cell(rep.num_realizations),
                          cell(static_cast<int>(nodes.size())), cell(grid.spacing_x()), cell(grid.spacing_y())});
            const std::size_t centre = nodes.size() / 2;
            for (std::size_t r = 0; r < R; ++r)
                per.add_row({v.variable, value_cell(v), cell(r), to_string(fs[f]), cell(values[f][r][centre].real()),
                             cell(values[f][r][centre].imag())});
        }

        if (c.analysis.save_images) {
            const DataCube cube = synthesize(c, geom, 0);
            BlockSVD svd;
            RegularizedSpectrum spec;
            const bool subspace = any_subspace(fs);
            if (subspace) {
                svd = block_svd(assemble_blocks(cube), c.threads);
                spec = spectrum_for(svd, c, c.imaging.epsilon);
            }
            for (auto f : fs) {
                const auto img = functional_image(f, grid, c, cube, subspace ? &svd : nullptr,
                                                  subspace ? &spec : nullptr, 0, c.threads);
                write_image(out, std::string("image_") + to_string(f) + v.suffix() + "_r0.csv", img, v);
            }
        }
    }
    const Json info = {{"statistic", "pointwise |mean|/std over realizations (divisor n-1), averaged over the "
                                     "window nodes centred on the first target"},
                       {"window_nodes_per_side", w}};
    out.table("stability.csv", rows, info);
    out.table("realizations.csv", per, info);
}

// ---------------------------------------------------------------------------

void run_separation(const ExperimentConfig &config, Output &out, std::ostream *log)
{
    CsvTable rows;
    rows.columns = {"sweep_variable", "sweep_value", "epsilon", "realization", "targets_found", "all_found"};
    CsvTable summary;
    summary.columns = {"sweep_variable", "sweep_value", "epsilon", "realizations", "all_found_count",
                       "mean_targets_found"};

    const auto &eps = config.analysis.epsilons;
    std::vector<Vec3> truth;
    for (const auto &t : config.scene)
        truth.push_back(t.position);
    const int P = static_cast<int>(truth.size());

    for (const auto &v : variants(config)) {
        const auto &c = v.config;
        const auto geom = AcquisitionGeometry::build(c.acquisition);
        log_line(log, "separation" + v.suffix() + ": " + std::to_string(c.realizations) + " realizations");
        const auto R = static_cast<std::size_t>(c.realizations);
        std::vector<std::vector<int>> found(R, std::vector<int>(eps.size()));
        parallel_for(R, c.threads, [&](std::size_t r) {
            const DataCube cube = synthesize(c, geom, static_cast<int>(r));
            const auto svd = block_svd(assemble_blocks(cube));
            for (std::size_t e = 0; e < eps.size(); ++e) {
                const auto spec = spectrum_for(svd, c, eps[e]);
                const auto img = functional_image(Functional::inverse_f, c.imaging.grid, c, cube, &svd, &spec,
                                                  static_cast<int>(r), 1);
                found[r][e] = targets_with_local_maximum(img, truth, c.analysis.separation_cells);
            }
        });
        for (std::size_t e = 0; e < eps.size(); ++e) {
            int all = 0;
            double sum = 0.0;
            for (std::size_t r = 0; r < R; ++r) {
                all += found[r][e] >= P;
                sum += found[r][e];
                rows.add_row({v.variable, value_cell(v), cell(eps[e]), cell(r), cell(found[r][e]),
                              cell(found[r][e] >= P ? 1 : 0)});
            }
            summary.add_row({v.variable, value_cell(v), cell(eps[e]), cell(c.realizations), cell(all),
                             cell(sum / static_cast<double>(R))});
        }

        if (c.analysis.save_images) {
            const DataCube cube = synthesize(c, geom, 0);
            const auto svd = block_svd(assemble_blocks(cube), c.threads);
            for (std::size_t e = 0; e < eps.size(); ++e) {
                const auto spec = spectrum_for(svd, c, eps[e]);
                const auto img =
                    functional_image(Functional::inverse_f, c.imaging.grid, c, cube, &svd, &spec, 0, c.threads);
                write_image(out, "image_inverse_f_eps_" + std::to_string(e) + v.suffix() + "_r0.csv", img, v);
            }
            for (auto f : c.imaging.functionals) {
                if (needs_subspace(f))
                    continue;
                const auto img = functional_image(f, c.imaging.grid, c, cube, nullptr, nullptr, 0, c.threads);
                write_image(out, std::string("image_") + to_string(f) + v.suffix() + "_r0.csv", img, v);
            }
        }
    }
    const Json info = {{"criterion", "local maximum of 1/F within separation_cells grid cells of each target"},
                       {"separation_cells", config.analysis.separation_cells}};
    out.table("separation.csv", rows, info);
    out.table("separation_summary.csv", summary, info);
}

} // namespace

RunResult run_experiment(const ExperimentConfig &config, const std::filesystem::path &out_dir, std::ostream *log)
{
    Output out(config, out_dir);
    Json effective = to_json(config);
    effective.erase("threads");
    effective.erase("output_dir");
    out.json("config.json", {{"config_hash", config_hash(config)},
                             {"code_version", code_version()},
                             {"config", effective}});
    switch (config.kind) {
    case ExperimentKind::image: run_image(config, out, log); break;
    case ExperimentKind::resolution_sweep: run_resolution(config, out, log); break;
    case ExperimentKind::reflectivity_error: run_reflectivity_error(config, out, log); break;
    case ExperimentKind::stability: run_stability(config, out, log); break;
    case ExperimentKind::separation: run_separation(config, out, log); break;
    }
    return out.result();
}

} // namespace sarsub
