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

// Command-line front end: fluorescence readout distributions, Haar-ensemble
// loss studies, parameter sweeps and theory-vs-simulation validation, all
// emitted as CSV with the resolved configuration embedded in each file header.

#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "iontomo/csv.hpp"
#include "iontomo/errors.hpp"
#include "iontomo/experiments.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitCheckFailed = 4;

struct CommonFlags {
    std::string config_path;
    std::string out_override;
    std::uint64_t seed_override = 0;
    bool seed_given = false;
    int threads_override = 0;
    bool check = false;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_path, "JSON config file")->required();
    cmd->add_option("--out", flags.out_override, "output directory (overrides config)");
    cmd->add_option("--seed", flags.seed_override, "RNG seed (overrides config)")
        ->each([&](const std::string&) { flags.seed_given = true; });
    cmd->add_option("--threads", flags.threads_override,
                    "worker threads (overrides config)");
    cmd->add_flag("--check", flags.check,
                  "evaluate the config's 'check' bounds and fail on violation");
}

iontomo::ExperimentConfig resolve(const CommonFlags& flags) {
    iontomo::ExperimentConfig config = iontomo::load_config(flags.config_path);
    if (!flags.out_override.empty()) {
        config.out_dir = flags.out_override;
    }
    if (flags.seed_given) {
        config.seed = flags.seed_override;
    }
    if (flags.threads_override > 0) {
        config.threads = flags.threads_override;
    }
    return config;
}

int finish(const iontomo::ExperimentConfig& config, const iontomo::MetricMap& metrics,
           bool check) {
    for (const auto& [name, value] : metrics) {
        std::printf("%s = %s\n", name.c_str(), iontomo::format_number(value).c_str());
    }
    if (!check) {
        return kExitOk;
    }
    const auto failures = iontomo::evaluate_checks(config, metrics);
    for (const auto& failure : failures) {
        std::fprintf(stderr, "CHECK FAILED: %s\n", failure.c_str());
    }
    if (failures.empty() && !config.checks.empty()) {
        std::printf("all %zu checks passed\n", config.checks.size());
    }
    return failures.empty() ? kExitOk : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fuzzy-measurement tomography of trapped-ion qubit registers"};
    app.require_subcommand(1);

    CommonFlags flags;
    CLI::App* dist = app.add_subcommand(
        "dist", "dump bright/dark/decay count distributions and threshold error curves");
    CLI::App* ensemble = app.add_subcommand(
        "ensemble", "Haar-ensemble fidelity-loss study for the configured model");
    CLI::App* sweep = app.add_subcommand(
        "sweep", "ensemble study across a time or T1 grid for both fuzzy models");
    CLI::App* validate = app.add_subcommand(
        "validate", "simulate reconstructions and test them against the asymptotic theory");
    CLI::App* povm_dump =
        app.add_subcommand("povm-dump", "serialize the configured model's POVM");
    for (CLI::App* cmd : {dist, ensemble, sweep, validate, povm_dump}) {
        add_common(cmd, flags);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        const iontomo::ExperimentConfig config = resolve(flags);
        iontomo::MetricMap metrics;
        if (dist->parsed()) {
            metrics = iontomo::run_dist(config);
        } else if (ensemble->parsed()) {
            metrics = iontomo::run_ensemble(config);
        } else if (sweep->parsed()) {
            metrics = iontomo::run_sweep(config);
        } else if (validate->parsed()) {
            metrics = iontomo::run_validate(config);
        } else if (povm_dump->parsed()) {
            metrics = iontomo::run_povm_dump(config);
        }
        return finish(config, metrics, flags.check);
    } catch (const iontomo::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const iontomo::NumericalError& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return kExitNumerical;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitNumerical;
    }
}
