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
//
// Command-line driver: runs experiments from JSON configs or built-in presets.
//
//   sarsub run --config cfg.json [--preset NAME] [--seed S] [--out DIR]
//              [--realizations K] [--threads T]
//   sarsub list-presets
//   sarsub show-preset NAME
//
// Exit codes: 0 ok, 2 configuration error, 3 numerical error, 4 I/O error.

#include "sarsub/config.hpp"
#include "sarsub/errors.hpp"
#include "sarsub/experiments.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>

namespace {

enum Exit { kOk = 0, kInternal = 1, kConfig = 2, kNumerical = 3, kIo = 4 };

sarsub::Json load_config_file(const std::string &path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw sarsub::IoError("cannot open config '" + path + "'");
    try {
        return sarsub::Json::parse(is);
    } catch (const nlohmann::json::parse_error &e) {
        throw sarsub::ConfigError("config", std::string("malformed JSON in '") + path + "': " + e.what());
    }
}

struct RunOptions {
    std::string config_path;
    std::string preset;
    std::optional<std::uint64_t> seed;
    std::optional<int> realizations;
    std::optional<int> threads;
    std::string out;
};

int run(const RunOptions &opt)
{
    using namespace sarsub;
    if (opt.config_path.empty() && opt.preset.empty())
        throw ConfigError("config", "give --config, --preset or both");

    Json file = opt.config_path.empty() ? Json::object() : load_config_file(opt.config_path);
    if (!file.is_object())
        throw ConfigError("config", "top level must be an object");
    std::string preset = opt.preset;
    if (preset.empty() && file.contains("preset") && file["preset"].is_string())
        preset = file["preset"].get<std::string>();
    Json merged = preset.empty() ? file : merge_json(preset_json(preset), file);
    if (!preset.empty())
        merged["preset"] = preset;
    if (opt.seed)
        merged["seed"] = *opt.seed;
    if (opt.realizations)
        merged["realizations"] = *opt.realizations;
    if (opt.threads)
        merged["threads"] = *opt.threads;

    ExperimentConfig config = parse_config(merged);
    std::filesystem::path out = opt.out;
    if (out.empty())
        out = config.output_dir.empty() ? std::filesystem::path("out") / config.name
                                        : std::filesystem::path(config.output_dir);
    config.output_dir = out.string();

    std::cerr << "sarsub " << code_version() << ": " << config.name << " (" << to_string(config.kind)
              << "), config " << config_hash(config) << " -> " << out.string() << '\n';
    const auto result = run_experiment(config, out, &std::cerr);
    for (const auto &f : result.files)
        std::cout << (out / f).string() << '\n';
    return kOk;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"sarsub: quantitative signal-subspace SAR imaging experiments"};
    app.require_subcommand(1);

    RunOptions opt;
    auto *run_cmd = app.add_subcommand("run", "run an experiment from a config file and/or a preset");
    run_cmd->add_option("--config", opt.config_path, "JSON experiment config");
    run_cmd->add_option("--preset", opt.preset, "built-in preset (the config file patches it)");
    run_cmd->add_option("--seed", opt.seed, "master seed");
    run_cmd->add_option("--out", opt.out, "output directory (default out/<name>)");
    run_cmd->add_option("--realizations", opt.realizations, "Monte Carlo realizations");
    run_cmd->add_option("--threads", opt.threads, "worker threads");

    auto *list_cmd = app.add_subcommand("list-presets", "list built-in presets");
    std::string show_name;
    auto *show_cmd = app.add_subcommand("show-preset", "print the JSON config of a preset");
    show_cmd->add_option("name", show_name, "preset name")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfig;
    }

    try {
        if (*list_cmd) {
            for (const auto &name : sarsub::preset_names())
                std::cout << name << "  " << sarsub::preset_description(name) << '\n';
            return kOk;
        }
        if (*show_cmd) {
            std::cout << sarsub::preset_json(show_name).dump(2) << '\n';
            return kOk;
        }
        return run(opt);
    } catch (const sarsub::ConfigError &e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfig;
    } catch (const sarsub::DimensionError &e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfig;
    } catch (const sarsub::IoError &e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return kIo;
    } catch (const std::filesystem::filesystem_error &e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return kIo;
    } catch (const sarsub::NumericalError &e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return kNumerical;
    } catch (const sarsub::SingularGeometryError &e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return kNumerical;
    } catch (const sarsub::DomainError &e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return kNumerical;
    } catch (const sarsub::WindowError &e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return kNumerical;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInternal;
    }
}
