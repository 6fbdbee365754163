// SPDX-License-Identifier: Apache-2.0
//
// rislocate: RIS-aided mmWave localization simulator and sparse recovery toolkit
// Copyright (C) 2026 The rislocate authors
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

#include "rislocate/config.hpp"
#include "rislocate/errors.hpp"
#include "rislocate/report.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace fs = std::filesystem;
using namespace rislocate;

namespace {

struct Options {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::uint64_t n_ris = 8;
    std::uint64_t n_subcarriers = 10;
    std::uint64_t n_blocks = 60;
};

RunConfig load(const Options& opts) {
    RunConfig config = opts.config.empty() ? parse_config_text("") : parse_config(opts.config);
    if (opts.seed) config.experiment.seed = *opts.seed;
    if (!opts.out.empty()) config.output.directory = opts.out;
    return config;
}

void write_file(const fs::path& path, const std::string& body) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    out << body;
    out.close();
    if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
    std::cout << "wrote " << path.string() << '\n';
}

fs::path output_path(const RunConfig& config, const std::string& suffix) {
    return fs::path(config.output.directory) / (config.output.prefix + suffix);
}

void emit(const RunConfig& config, const std::string& command, const std::string& csv_suffix,
          const ExperimentResult& result) {
    std::ostringstream csv, summary;
    write_results_csv(csv, result);
    write_summary(summary, command, config, result);
    write_file(output_path(config, csv_suffix), csv.str());
    write_file(output_path(config, "_summary.txt"), summary.str());
}

int cmd_run(const Options& opts) {
    const auto config = load(opts);
    emit(config, "run", "_results.csv", run_sweep(config.sweep_spec()));
    return 0;
}

int cmd_heatmap(const Options& opts) {
    const auto config = load(opts);
    const auto result = placement_heatmap(config.experiment.lattice, config.scenario(), config.experiment.n_trials,
                                          config.experiment.seed, SolverKind::Tmsbl);
    emit(config, "heatmap", "_heatmap.csv", result);
    return 0;
}

int cmd_complexity(const Options& opts) {
    const auto config = load(opts);
    std::ostringstream csv;
    write_complexity_csv(csv, complexity_report(opts.n_ris, opts.n_subcarriers, opts.n_blocks));
    write_file(output_path(config, "_complexity.csv"), csv.str());
    return 0;
}

int cmd_validate(const Options& opts) {
    std::cout << echo_config(load(opts));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"RIS-aided mmWave localization simulator"};
    app.require_subcommand(1);
    Options opts;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--config", opts.config, "INI configuration file (defaults when omitted)");
        sub->add_option("--seed", opts.seed, "Override [experiment] seed");
        sub->add_option("--out", opts.out, "Override [output] directory");
    };
    auto* run = app.add_subcommand("run", "Run the configured sweep and write <prefix>_results.csv");
    auto* heatmap = app.add_subcommand("heatmap", "RIS placement sweep over the configured lattice");
    auto* complexity = app.add_subcommand("complexity", "Write the operation-count table");
    auto* validate = app.add_subcommand("validate", "Parse and validate the configuration only");
    for (auto* sub : {run, heatmap, complexity, validate}) common(sub);
    complexity->add_option("--n-ris", opts.n_ris, "RIS elements")->check(CLI::PositiveNumber);
    complexity->add_option("--n-subcarriers", opts.n_subcarriers, "Pilot subcarriers")->check(CLI::PositiveNumber);
    complexity->add_option("--n-blocks", opts.n_blocks, "Training blocks")->check(CLI::PositiveNumber);

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(opts);
        if (heatmap->parsed()) return cmd_heatmap(opts);
        if (complexity->parsed()) return cmd_complexity(opts);
        return cmd_validate(opts);
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
