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

#include "support.hpp"

#include "sarsub/config.hpp"
#include "sarsub/errors.hpp"
#include "sarsub/experiments.hpp"
#include "sarsub/io.hpp"
#include "sarsub/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

using namespace sarsub;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string &name)
{
    const auto dir = fs::temp_directory_path() / ("sarsub_tests_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string expect_config_key(const Json &j)
{
    try {
        (void)parse_config(j);
    } catch (const ConfigError &e) {
        return e.key();
    }
    return "<no error>";
}

Json minimal_config()
{
    return Json::parse(R"({"name": "t", "scene": [{"x": 1.0, "y": 1.0, "rho": [0.0, 3.4]}]})");
}

} // namespace

TEST_SUITE("io")
{
    TEST_CASE("doubles round-trip through text")
    {
        for (double x : {0.0, -0.0, 1.0, 0.1, -3.4, 1e-300, 5e-324, 1.7976931348623157e308, 3.141592653589793,
                         1.0 / 3.0, 44.1339}) {
            const double back = parse_double(format_double(x));
            CHECK(std::memcmp(&back, &x, sizeof x) == 0);
        }
        CHECK(std::isnan(parse_double(format_double(std::numeric_limits<double>::quiet_NaN()))));
        CHECK(parse_double(format_double(std::numeric_limits<double>::infinity())) ==
              std::numeric_limits<double>::infinity());
        CHECK(parse_double(format_double(-std::numeric_limits<double>::infinity())) ==
              -std::numeric_limits<double>::infinity());
        CHECK(format_double(0.5) == "0.5");
        CHECK_THROWS_AS((void)parse_double("1.5x"), IoError);
        CHECK_THROWS_AS((void)parse_double(""), IoError);
    }

    TEST_CASE("CSV round-trip")
    {
        const auto dir = scratch_dir("csv");
        CsvTable t;
        t.columns = {"a", "b", "name"};
        t.add_row({cell(1.25), cell(-7), cell("x")});
        t.add_row({cell(1e-17), cell(std::size_t{3}), cell(std::string("y"))});
        write_csv(dir / "t.csv", t);
        const auto back = read_csv(dir / "t.csv");
        CHECK(back.columns == t.columns);
        CHECK(back.rows == t.rows);
        CHECK(back.number(1, "a") == 1e-17);
        CHECK(back.column("name") == 2);
        CHECK_THROWS_AS((void)back.column("missing"), IoError);
        CHECK_THROWS_AS(t.add_row({"1"}), DimensionError);
        CHECK_THROWS_AS((void)read_csv(dir / "absent.csv"), IoError);
        CHECK(sidecar_path(dir / "t.csv") == dir / "t.csv.json");
    }

    TEST_CASE("data cube round-trip is lossless")
    {
        const auto dir = scratch_dir("cube");
        const auto g = testing::small_geometry(4, 3);
        const auto cube = add_noise(simulate_born(testing::three_targets(), g), 12.5, 77);
        write_cube(dir / "cube.csv", cube);
        const auto back = read_cube(dir / "cube.csv");
        CHECK(back.values == cube.values);
        CHECK(back.geometry.hash() == g.hash());
        CHECK(back.provenance.snr_db == 12.5);
        CHECK(back.provenance.noise_seed == 77);
        CHECK(back.provenance.scene_hash == cube.provenance.scene_hash);

        const auto clean = simulate_born(testing::single_target(), g);
        write_cube(dir / "clean.csv", clean);
        CHECK(std::isinf(read_cube(dir / "clean.csv").provenance.snr_db));
    }

    TEST_CASE("corrupt cube files are I/O errors")
    {
        const auto dir = scratch_dir("badcube");
        CHECK_THROWS_AS((void)read_cube(dir / "none.csv"), IoError);
        {
            std::ofstream out(dir / "bad.csv");
            out << "{\"format\": \"something-else\"}\nm,n,re,im\n";
        }
        CHECK_THROWS_AS((void)read_cube(dir / "bad.csv"), IoError);
        const auto g = testing::small_geometry(4, 3);
        write_cube(dir / "short.csv", simulate_born(testing::single_target(), g));
        std::string text;
        {
            std::ifstream in(dir / "short.csv");
            text.assign(std::istreambuf_iterator<char>(in), {});
        }
        text.resize(text.size() - 30);
        {
            std::ofstream out(dir / "short.csv");
            out << text;
        }
        CHECK_THROWS_AS((void)read_cube(dir / "short.csv"), IoError);
    }

    TEST_CASE("image tables")
    {
        GridSpec grid;
        grid.nx = 2;
        grid.ny = 1;
        grid.extent = Vec2(1.0, 1.0);
        ImageGrid real{grid, {Complex(1.0, 0.0), Complex(2.0, 0.0)}, false, {}};
        auto t = image_table(real);
        CHECK(t.columns == std::vector<std::string>{"x", "y", "value"});
        CHECK(t.rows.size() == 2);
        CHECK(t.number(1, "x") == 0.5);
        ImageGrid cplx{grid, {Complex(1.0, -1.0), Complex(2.0, 0.5)}, true, {}};
        t = image_table(cplx);
        CHECK(t.columns == std::vector<std::string>{"x", "y", "value_re", "value_im"});
        CHECK(t.number(0, "value_im") == -1.0);
    }
}

TEST_SUITE("config")
{
    TEST_CASE("thirteen presets all parse")
    {
        const auto names = preset_names();
        CHECK(names.size() == 13);
        CHECK(std::find(names.begin(), names.end(), "fig3") != names.end());
        for (const auto &name : names) {
            CAPTURE(name);
            ExperimentConfig cfg;
            CHECK_NOTHROW(cfg = parse_config(preset_json(name)));
            CHECK(cfg.preset == name);
            CHECK_FALSE(preset_description(name).empty());
        }
        CHECK_THROWS_AS((void)preset_json("fig99"), ConfigError);
    }

    TEST_CASE("defaults follow the GOTCHA-like geometry")
    {
        const auto cfg = parse_config(minimal_config());
        CHECK(cfg.acquisition.range_offset_R == 3550.0);
        CHECK(cfg.acquisition.height_H == 7300.0);
        CHECK(cfg.acquisition.aperture_a == 130.0);
        CHECK(cfg.acquisition.center_frequency_f0 == 9.6e9);
        CHECK(cfg.acquisition.bandwidth_B == 622.0e6);
        CHECK(cfg.acquisition.num_freq_M == 20);
        CHECK(cfg.acquisition.num_positions_N == 32);
        CHECK(cfg.imaging.grid.center.isApprox(Vec2(1.0, 1.0)));
        CHECK(std::isinf(cfg.noise.snr_db));
    }

    TEST_CASE("unknown and invalid keys name the offender")
    {
        auto j = minimal_config();
        j["colour"] = 1;
        CHECK(expect_config_key(j) == "colour");
        j = minimal_config();
        j["imaging"]["epsilonn"] = 1e-3;
        CHECK(expect_config_key(j) == "imaging.epsilonn");
        j = minimal_config();
        j["imaging"]["epsilon"] = -1.0;
        CHECK(expect_config_key(j) == "imaging.epsilon");
        j = minimal_config();
        j["acquisition"]["num_freq_M"] = 1;
        CHECK(expect_config_key(j).find("num_freq_M") != std::string::npos);
        j = minimal_config();
        j["realizations"] = 0;
        CHECK(expect_config_key(j) == "realizations");
        j = minimal_config();
        j["sweep"] = Json::parse(R"({"variable": "wingspan", "values": [1, 2, 3]})");
        CHECK(expect_config_key(j) == "sweep.variable");
        j = minimal_config();
        j["kind"] = "resolution_sweep";
        j["sweep"] = Json::parse(R"({"variable": "epsilon", "values": [1e-8, 1e-6]})");
        CHECK(expect_config_key(j) == "sweep.values");
        j = minimal_config();
        j.erase("scene");
        CHECK(expect_config_key(j) == "scene");
        j = minimal_config();
        j["imaging"]["functionals"] = Json::array({"music"});
        CHECK(expect_config_key(j) == "imaging.functionals");
    }

    TEST_CASE("canonical form and hash")
    {
        const auto a = parse_config(minimal_config());
        const auto b = parse_config(to_json(a));
        CHECK(to_json(a) == to_json(b));
        CHECK(config_hash(a) == config_hash(b));
        CHECK(config_hash(a).size() == 16);
        auto c = a;
        c.threads = 4;
        c.output_dir = "elsewhere";
        CHECK(config_hash(c) == config_hash(a));
        c.seed = 2;
        CHECK(config_hash(c) != config_hash(a));
    }

    TEST_CASE("merge replaces leaves and merges objects")
    {
        const Json base = Json::parse(R"({"a": {"b": 1, "c": [1, 2]}, "d": 3})");
        const Json patch = Json::parse(R"({"a": {"c": [5]}, "e": true})");
        const Json merged = merge_json(base, patch);
        CHECK(merged == Json::parse(R"({"a": {"b": 1, "c": [5]}, "d": 3, "e": true})"));
    }

    TEST_CASE("sweep values are applied")
    {
        const auto cfg = parse_config(minimal_config());
        CHECK(with_sweep_value(cfg, "epsilon", 1e-4).imaging.epsilon == 1e-4);
        CHECK(with_sweep_value(cfg, "bandwidth_B", 311e6).acquisition.bandwidth_B == 311e6);
        const auto fixed = with_sweep_value(cfg, "range_offset_R_fixed_L", 1775.0);
        const double L = std::hypot(3550.0, 7300.0);
        CHECK(std::hypot(fixed.acquisition.range_offset_R, fixed.acquisition.height_H) == doctest::Approx(L));
        CHECK(fixed.acquisition.range_offset_R == 1775.0);
        CHECK_THROWS_AS((void)with_sweep_value(cfg, "wingspan", 1.0), ConfigError);
        for (const auto &v : sweep_variables())
            CHECK_FALSE(v.empty());
    }

    TEST_CASE("derived seeds separate streams and realizations")
    {
        CHECK(derive_seed(1, Stream::noise, 0) != derive_seed(1, Stream::medium, 0));
        CHECK(derive_seed(1, Stream::noise, 0) != derive_seed(1, Stream::noise, 1));
        CHECK(derive_seed(1, Stream::noise, 0) != derive_seed(2, Stream::noise, 0));
        CHECK(derive_seed(9, Stream::direct, 3) == derive_seed(9, Stream::direct, 3));
    }

    TEST_CASE("experiment outputs carry sidecars and are reproducible")
    {
        auto j = minimal_config();
        j["imaging"]["grid"] = Json::parse(R"({"extent": [0.2, 0.2], "n": [5, 5]})");
        j["noise"]["snr_db"] = 40.0;
        const auto cfg = parse_config(j);
        const auto d1 = scratch_dir("run1");
        const auto d2 = scratch_dir("run2");
        const auto r1 = run_experiment(cfg, d1);
        const auto r2 = run_experiment(cfg, d2);
        CHECK(r1.config_hash == config_hash(cfg));
        REQUIRE(r1.files == r2.files);
        for (const auto &f : r1.files) {
            if (f.extension() != ".csv")
                continue;
            CAPTURE(f.string());
            const auto meta = read_json(sidecar_path(d1 / f));
            CHECK(meta.at("config_hash") == r1.config_hash);
            CHECK(meta.at("code_version") == code_version());
            CHECK(meta.contains("preset"));
            std::ifstream a(d1 / f), b(d2 / f);
            const std::string ta((std::istreambuf_iterator<char>(a)), {});
            const std::string tb((std::istreambuf_iterator<char>(b)), {});
            CHECK(ta == tb);
            CHECK_FALSE(read_csv(d1 / f).columns.empty());
        }
    }
}
