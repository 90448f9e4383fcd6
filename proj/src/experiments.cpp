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

#include "iontomo/experiments.hpp"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "iontomo/csv.hpp"
#include "iontomo/errors.hpp"
#include "iontomo/simulator.hpp"
#include "iontomo/stats.hpp"
#include "json.hpp"

namespace iontomo {

namespace {

using nlohmann::json;

void parallel_for(int count, int threads, const std::function<void(int)>& task) {
    threads = std::max(1, std::min(threads, count));
    if (threads == 1) {
        for (int i = 0; i < count; ++i) {
            task(i);
        }
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> team;
    team.reserve(threads);
    for (int t = 0; t < threads; ++t) {
        team.emplace_back([&] {
            for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
                task(i);
            }
        });
    }
    for (auto& worker : team) {
        worker.join();
    }
}

MeasurementModel parse_model(const std::string& name) {
    if (name == "ideal") {
        return MeasurementModel::ideal_projector;
    }
    if (name == "threshold") {
        return MeasurementModel::threshold;
    }
    if (name == "photon_count") {
        return MeasurementModel::photon_count;
    }
    throw ConfigError("unknown model '" + name + "' (expected ideal|threshold|photon_count)");
}

int resolve_k0(const ExperimentConfig& config, MeasurementModel model,
               const ReadoutPhysics& phys) {
    if (model != MeasurementModel::threshold) {
        return 0;
    }
    return config.k0 > 0 ? config.k0 : optimal_threshold(phys, config.tail_tol);
}

int resolve_n_ph(MeasurementModel model, const ReadoutPhysics& phys, double tail_tol) {
    if (model == MeasurementModel::ideal_projector) {
        return -1;
    }
    return std::max(truncated_bright(phys, tail_tol).max_count(),
                    truncated_dark(phys, tail_tol).max_count());
}

void stamp(CsvTable& table, const char* command, const ExperimentConfig& config,
           MeasurementModel model, const ReadoutPhysics& phys, int k0, int n_ph) {
    table.meta("command", command);
    table.meta("model", model_name(model));
    table.meta("qubits", static_cast<double>(config.qubits));
    table.meta("bases", config.bases);
    table.meta("exposure_t", phys.exposure);
    table.meta("decay_rate_lambda", phys.decay_rate);
    table.meta("bright_rate_lambda_B", phys.bright_rate);
    table.meta("dark_rate_lambda_D", phys.dark_rate);
    table.meta("shots", static_cast<double>(config.shots));
    table.meta("seed", std::to_string(config.seed));
    table.meta("tail_tol", config.tail_tol);
    table.meta("k0", static_cast<double>(k0));
    table.meta("n_ph", static_cast<double>(n_ph));
    table.meta("ensemble_size", static_cast<double>(config.ensemble_size));
    table.meta("rank", static_cast<double>(config.rank));
}

std::filesystem::path out_path(const ExperimentConfig& config, const std::string& file) {
    std::filesystem::create_directories(config.out_dir);
    return std::filesystem::path(config.out_dir) / file;
}

json config_echo(const ExperimentConfig& config) {
    json j;
    j["physics"] = {{"t", config.physics.exposure},
                    {"lambda", config.physics.decay_rate},
                    {"lambda_B", config.physics.bright_rate},
                    {"lambda_D", config.physics.dark_rate}};
    j["qubits"] = config.qubits;
    j["bases"] = config.bases;
    j["model"] = model_name(config.model);
    j["k0"] = config.k0;
    j["tail_tol"] = config.tail_tol;
    j["shots"] = config.shots;
    j["seed"] = config.seed;
    j["ensemble"] = {{"size", config.ensemble_size},
                     {"reconstruct", config.ensemble_reconstruct},
                     {"rank", config.rank}};
    if (config.sweep) {
        j["sweep"] = {{"axis", config.sweep->axis}, {"grid", config.sweep->grid}};
    }
    j["validate"] = {{"mode", config.validate.mode},
                     {"reconstructions", config.validate.reconstructions}};
    j["out"] = config.out_dir;
    j["threads"] = config.threads;
    return j;
}

void write_sidecar(const ExperimentConfig& config, const char* command) {
    json j = config_echo(config);
    j["command"] = command;
    write_text_file(out_path(config, "run.json").string(), j.dump(2) + "\n");
}

struct StateRow {
    bool failed = false;
    std::string error;
    double sum_d = 0.0;
    double loss = 0.0;
    bool reconstructed = false;
    double one_minus_f = 0.0;
    double loglik = 0.0;
    int iterations = 0;
    bool converged = false;
    LossSpectrum spectrum;
};

struct EnsembleData {
    std::vector<StateRow> rows;
    int k0 = 0;
    int n_ph = -1;
    std::vector<double> losses;
    std::vector<double> one_minus_f;
};

/// Haar-ensemble evaluation of a model at given physics. State i draws its
/// amplitudes from child stream 2i and its synthetic dataset from child
/// stream 2i + 1 of `seed`, so results do not depend on thread count.
EnsembleData ensemble_core(const ExperimentConfig& config, MeasurementModel model,
                           const ReadoutPhysics& phys, std::uint64_t seed, bool reconstruct_flag) {
    if (config.bases != "pauli") {
        throw ConfigError("unknown basis set '" + config.bases + "'");
    }
    const MeasurementProtocol protocol = pauli_bases(config.qubits);
    const int dim = 1 << config.qubits;

    EnsembleData data;
    data.k0 = resolve_k0(config, model, phys);
    data.n_ph = resolve_n_ph(model, phys, config.tail_tol);
    const Povm model_set = register_povm(model, phys, data.k0, config.tail_tol, config.qubits);
    const auto per_basis = protocol_povms(protocol, model_set);
    const auto allocation = allocate_shots(config.shots, protocol.basis_count());

    const Rng master(seed);
    data.rows.resize(config.ensemble_size);
    parallel_for(config.ensemble_size, config.threads, [&](int i) {
        StateRow& row = data.rows[i];
        try {
            Rng state_stream = master.child(2 * static_cast<std::uint64_t>(i));
            const PureState state = haar_random_pure(dim, state_stream);
            const FisherResult info = fisher_information(state, per_basis, allocation);
            row.spectrum = loss_spectrum(info, state, static_cast<double>(config.shots));
            row.sum_d = row.spectrum.total();
            row.loss = mean_loss(row.spectrum);
            if (reconstruct_flag) {
                const Dataset dataset = run_experiment(
                    state, protocol, phys, config.shots, model, data.k0, config.tail_tol,
                    master.child(2 * static_cast<std::uint64_t>(i) + 1));
                MleOptions options;
                options.rank = config.rank;
                const ReconstructionResult result =
                    reconstruct(dataset, per_basis, options, &state);
                row.reconstructed = true;
                row.one_minus_f = 1.0 - *result.fidelity;
                row.loglik = result.log_likelihood;
                row.iterations = result.iterations;
                row.converged = result.converged;
            }
        } catch (const std::exception& e) {
            row.failed = true;
            row.error = e.what();
        }
    });

    int failures = 0;
    for (const auto& row : data.rows) {
        if (row.failed) {
            ++failures;
        } else {
            data.losses.push_back(row.loss);
            if (row.reconstructed) {
                data.one_minus_f.push_back(row.one_minus_f);
            }
        }
    }
    if (failures * 20 > config.ensemble_size) {
        std::string first;
        for (const auto& row : data.rows) {
            if (row.failed) {
                first = row.error;
                break;
            }
        }
        throw NumericalError("ensemble: more than 5% of states failed; first error: " + first);
    }
    return data;
}

void append_ensemble_rows(CsvTable& table, const EnsembleData& data) {
    for (std::size_t i = 0; i < data.rows.size(); ++i) {
        const StateRow& row = data.rows[i];
        if (row.failed) {
            table.rows.push_back({std::to_string(i), "1", "", "", "", "", "", ""});
            continue;
        }
        table.rows.push_back({std::to_string(i), "0", format_number(row.sum_d),
                              format_number(row.loss),
                              row.reconstructed ? format_number(row.one_minus_f) : "",
                              row.reconstructed ? format_number(row.loglik) : "",
                              row.reconstructed ? std::to_string(row.iterations) : "",
                              row.reconstructed ? (row.converged ? "1" : "0") : ""});
    }
}

double density_at(const LossDistribution& dist, double x) {
    if (x < 0.0) {
        return 0.0;
    }
    const auto cell = static_cast<std::size_t>(x / dist.cell_width);
    return cell < dist.density.size() ? dist.density[cell] : 0.0;
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) {
        throw ConfigError("config root must be a JSON object");
    }
    for (const auto& [key, value] : j.items()) {
        static const std::vector<std::string> known{
            "physics", "qubits", "bases",    "model", "k0",  "tail_tol", "shots",
            "seed",    "sweep",  "ensemble", "validate", "out", "threads",  "dump_basis",
            "check"};
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            throw ConfigError("unknown config key '" + key + "'");
        }
        (void)value;
    }

    try {
        if (!j.contains("physics")) {
            throw ConfigError("config requires a 'physics' object");
        }
        const json& p = j.at("physics");
        const double t = p.at("t").get<double>();
        const double bright = p.at("lambda_B").get<double>();
        const double dark = p.at("lambda_D").get<double>();
        double decay = 0.0;
        if (p.contains("lambda") == p.contains("T1")) {
            throw ConfigError("physics requires exactly one of 'lambda' or 'T1'");
        }
        if (p.contains("lambda")) {
            decay = p.at("lambda").get<double>();
        } else {
            const double t1 = p.at("T1").get<double>();
            if (!(t1 > 0.0)) {
                throw ConfigError("T1 must be positive");
            }
            decay = 1.0 / t1;
        }

        ExperimentConfig config;
        config.physics = ReadoutPhysics(t, decay, bright, dark);
        config.qubits = j.value("qubits", 2);
        if (config.qubits < 1 || config.qubits > 3) {
            throw ConfigError("qubits must be 1, 2 or 3");
        }
        config.bases = j.value("bases", std::string("pauli"));
        if (!j.contains("model")) {
            throw ConfigError("config requires 'model'");
        }
        config.model = parse_model(j.at("model").get<std::string>());
        if (j.contains("k0")) {
            if (j.at("k0").is_string()) {
                if (j.at("k0").get<std::string>() != "optimal") {
                    throw ConfigError("k0 must be a positive integer or \"optimal\"");
                }
                config.k0 = 0;
            } else {
                config.k0 = j.at("k0").get<int>();
                if (config.k0 < 0) {
                    throw ConfigError("k0 must be nonnegative");
                }
            }
        }
        config.tail_tol = j.value("tail_tol", 1e-12);
        if (!(config.tail_tol > 0.0 && config.tail_tol < 1.0)) {
            throw ConfigError("tail_tol must lie in (0, 1)");
        }
        if (!j.contains("shots")) {
            throw ConfigError("config requires 'shots'");
        }
        config.shots = j.at("shots").get<long>();
        if (config.shots < 1) {
            throw ConfigError("shots must be positive");
        }
        if (!j.contains("seed")) {
            throw ConfigError("config requires 'seed'");
        }
        config.seed = j.at("seed").get<std::uint64_t>();

        if (j.contains("ensemble")) {
            const json& e = j.at("ensemble");
            config.ensemble_size = e.value("size", config.ensemble_size);
            config.ensemble_reconstruct = e.value("reconstruct", false);
            config.rank = e.value("rank", config.rank);
            if (config.ensemble_size < 2) {
                throw ConfigError("ensemble size must be at least 2");
            }
            if (config.rank < 0 || config.rank > (1 << config.qubits)) {
                throw ConfigError("rank must lie in [0, 2^qubits]");
            }
        }
        if (j.contains("sweep")) {
            SweepSpec sweep;
            sweep.axis = j.at("sweep").at("axis").get<std::string>();
            if (sweep.axis != "time" && sweep.axis != "T1") {
                throw ConfigError("sweep axis must be 'time' or 'T1'");
            }
            if (j.at("sweep").contains("grid")) {
                sweep.grid = j.at("sweep").at("grid").get<std::vector<double>>();
            } else {
                // Default grids: 12 points, linear in exposure time and
                // logarithmic in relaxation time.
                for (int i = 0; i < 12; ++i) {
                    if (sweep.axis == "time") {
                        sweep.grid.push_back(0.5 + i * (8.0 - 0.5) / 11.0);
                    } else {
                        sweep.grid.push_back(std::pow(10.0, 2.0 * i / 11.0));
                    }
                }
            }
            if (sweep.grid.empty()) {
                throw ConfigError("sweep grid is empty");
            }
            for (std::size_t i = 0; i < sweep.grid.size(); ++i) {
                if (!(sweep.grid[i] > 0.0)) {
                    throw ConfigError("sweep grid values must be positive");
                }
                if (i > 0 && !(sweep.grid[i] > sweep.grid[i - 1])) {
                    throw ConfigError("sweep grid must be strictly increasing");
                }
            }
            config.sweep = std::move(sweep);
        }
        if (j.contains("validate")) {
            config.validate.mode = j.at("validate").value("mode", std::string("ensemble"));
            if (config.validate.mode != "ensemble" && config.validate.mode != "fixed_state") {
                throw ConfigError("validate mode must be 'ensemble' or 'fixed_state'");
            }
            config.validate.reconstructions =
                j.at("validate").value("reconstructions", config.validate.reconstructions);
            if (config.validate.reconstructions < 10) {
                throw ConfigError("validate needs at least 10 reconstructions");
            }
        }
        config.out_dir = j.value("out", config.out_dir);
        config.threads = j.value("threads", 1);
        if (config.threads < 1) {
            throw ConfigError("threads must be positive");
        }
        if (j.contains("dump_basis")) {
            config.dump_basis = j.at("dump_basis").get<std::string>();
        }
        if (j.contains("check")) {
            for (const auto& [name, bounds] : j.at("check").items()) {
                if (!bounds.is_array() || bounds.size() != 2) {
                    throw ConfigError("check '" + name + "' must be a [low, high] array");
                }
                config.checks[name] = {bounds[0].get<double>(), bounds[1].get<double>()};
            }
        }
        return config;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("bad config: ") + e.what());
    }
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream stream(path);
    if (!stream) {
        throw ConfigError("cannot read config file: " + path);
    }
    std::ostringstream buffer;
    buffer << stream.rdbuf();
    return parse_config(buffer.str());
}

MetricMap run_dist(const ExperimentConfig& config) {
    const ReadoutPhysics& phys = config.physics;
    const CountDistribution bright = truncated_bright(phys, config.tail_tol);
    const CountDistribution dark = truncated_dark(phys, config.tail_tol);
    const CountDistribution decay = truncated_decay(phys, config.tail_tol);
    const int n_ph = std::max(bright.max_count(), dark.max_count());
    const int k0 = optimal_threshold(phys, config.tail_tol);

    const auto dump = [&](const char* file, const CountDistribution& dist) {
        CsvTable table;
        stamp(table, "dist", config, config.model, phys, k0, n_ph);
        table.header = {"k", "probability"};
        for (int k = 0; k <= dist.max_count(); ++k) {
            table.rows.push_back({std::to_string(k), format_number(dist.pmf[k])});
        }
        table.write(out_path(config, file).string());
    };
    dump("bright.csv", bright);
    dump("dark.csv", dark);
    dump("decay.csv", decay);

    CsvTable errors;
    stamp(errors, "dist", config, config.model, phys, k0, n_ph);
    errors.header = {"k0", "eps10", "eps01", "total"};
    for (int cut = 1; cut <= std::max(n_ph, 1); ++cut) {
        const ReadoutErrors e = readout_errors(phys, cut);
        errors.rows.push_back({std::to_string(cut), format_number(e.eps10),
                               format_number(e.eps01), format_number(e.eps10 + e.eps01)});
    }
    errors.write(out_path(config, "errors_vs_threshold.csv").string());
    write_sidecar(config, "dist");

    const ReadoutErrors best = readout_errors(phys, k0);
    return MetricMap{{"k0_optimal", static_cast<double>(k0)},
                     {"n_ph", static_cast<double>(n_ph)},
                     {"eps10", best.eps10},
                     {"eps01", best.eps01}};
}

MetricMap run_ensemble(const ExperimentConfig& config) {
    const EnsembleData data = ensemble_core(config, config.model, config.physics, config.seed,
                                            config.ensemble_reconstruct);

    CsvTable states;
    stamp(states, "ensemble", config, config.model, config.physics, data.k0, data.n_ph);
    states.header = {"state_id", "failed", "sum_d", "L", "one_minus_F", "loglik",
                     "iterations", "converged"};
    append_ensemble_rows(states, data);
    states.write(out_path(config, "ensemble_states.csv").string());

    MetricMap metrics{{"states", static_cast<double>(data.losses.size())},
                      {"mean_L", mean(data.losses)},
                      {"stderr_L", standard_error(data.losses)},
                      {"k0", static_cast<double>(data.k0)},
                      {"n_ph", static_cast<double>(data.n_ph)}};
    CsvTable summary;
    stamp(summary, "ensemble", config, config.model, config.physics, data.k0, data.n_ph);
    summary.header = {"states", "mean_L", "stderr_L", "mean_one_minus_F",
                      "stderr_one_minus_F"};
    std::vector<std::string> row{format_number(metrics["states"]),
                                 format_number(metrics["mean_L"]),
                                 format_number(metrics["stderr_L"]), "", ""};
    if (!data.one_minus_f.empty()) {
        metrics["mean_one_minus_F"] = mean(data.one_minus_f);
        metrics["stderr_one_minus_F"] = standard_error(data.one_minus_f);
        row[3] = format_number(metrics["mean_one_minus_F"]);
        row[4] = format_number(metrics["stderr_one_minus_F"]);
    }
    summary.rows.push_back(row);
    summary.write(out_path(config, "ensemble_summary.csv").string());
    write_sidecar(config, "ensemble");
    return metrics;
}

MetricMap run_sweep(const ExperimentConfig& config) {
    if (!config.sweep) {
        throw ConfigError("sweep command requires a 'sweep' config block");
    }
    const SweepSpec& sweep = *config.sweep;
    const bool time_axis = sweep.axis == "time";

    CsvTable table;
    stamp(table, "sweep", config, config.model, config.physics, 0, -1);
    table.meta("sweep_axis", sweep.axis);
    table.header = {"axis", "value", "model", "states", "k0", "n_ph", "mean_L", "stderr_L"};

    const MeasurementModel models[2] = {MeasurementModel::photon_count,
                                        MeasurementModel::threshold};
    MetricMap metrics;
    double best[2] = {0.0, 0.0};
    double best_at[2] = {0.0, 0.0};
    for (std::size_t g = 0; g < sweep.grid.size(); ++g) {
        const double value = sweep.grid[g];
        const ReadoutPhysics phys =
            time_axis ? ReadoutPhysics(value, config.physics.decay_rate,
                                       config.physics.bright_rate, config.physics.dark_rate)
                      : ReadoutPhysics(config.physics.exposure, 1.0 / value,
                                       config.physics.bright_rate, config.physics.dark_rate);
        for (int m = 0; m < 2; ++m) {
            const std::uint64_t point_seed = Rng(config.seed).child(2 * g + m).seed();
            const EnsembleData data = ensemble_core(config, models[m], phys, point_seed, false);
            const double mean_L = mean(data.losses);
            table.rows.push_back({sweep.axis, format_number(value), model_name(models[m]),
                                  std::to_string(data.losses.size()),
                                  std::to_string(data.k0), std::to_string(data.n_ph),
                                  format_number(mean_L),
                                  format_number(standard_error(data.losses))});
            if (g == 0 || mean_L < best[m]) {
                best[m] = mean_L;
                best_at[m] = value;
            }
        }
    }
    table.write(out_path(config, "sweep.csv").string());

    CsvTable summary;
    stamp(summary, "sweep", config, config.model, config.physics, 0, -1);
    summary.meta("sweep_axis", sweep.axis);
    summary.header = {"model", "min_mean_L", "at_value"};
    for (int m = 0; m < 2; ++m) {
        const std::string name = model_name(models[m]);
        metrics[name + ".min_L"] = best[m];
        if (time_axis) {
            metrics[name + ".argmin"] = best_at[m];
        }
        summary.rows.push_back({name, format_number(best[m]),
                                time_axis ? format_number(best_at[m]) : ""});
    }
    summary.write(out_path(config, "sweep_summary.csv").string());
    write_sidecar(config, "sweep");
    return metrics;
}

MetricMap run_validate(const ExperimentConfig& config) {
    std::vector<double> samples;
    std::vector<LossSpectrum> spectra;
    int k0 = 0;
    int n_ph = -1;

    if (config.validate.mode == "ensemble") {
        ExperimentConfig inner = config;
        inner.ensemble_reconstruct = true;
        const EnsembleData data =
            ensemble_core(inner, config.model, config.physics, config.seed, true);
        k0 = data.k0;
        n_ph = data.n_ph;
        samples = data.one_minus_f;
        for (const auto& row : data.rows) {
            if (!row.failed) {
                spectra.push_back(row.spectrum);
            }
        }
    } else {
        const MeasurementProtocol protocol = pauli_bases(config.qubits);
        k0 = resolve_k0(config, config.model, config.physics);
        n_ph = resolve_n_ph(config.model, config.physics, config.tail_tol);
        const Povm model_set =
            register_povm(config.model, config.physics, k0, config.tail_tol, config.qubits);
        const auto per_basis = protocol_povms(protocol, model_set);
        const auto allocation = allocate_shots(config.shots, protocol.basis_count());

        const Rng master(config.seed);
        Rng state_stream = master.child(0);
        const PureState state = haar_random_pure(1 << config.qubits, state_stream);
        const FisherResult info = fisher_information(state, per_basis, allocation);
        spectra.push_back(loss_spectrum(info, state, static_cast<double>(config.shots)));

        samples.resize(config.validate.reconstructions);
        parallel_for(config.validate.reconstructions, config.threads, [&](int r) {
            const Dataset dataset = run_experiment(
                state, protocol, config.physics, config.shots, config.model, k0,
                config.tail_tol, master.child(static_cast<std::uint64_t>(r) + 1));
            MleOptions options;
            options.rank = config.rank;
            const ReconstructionResult result = reconstruct(dataset, per_basis, options, &state);
            samples[r] = 1.0 - *result.fidelity;
        });
    }

    // Theory: equal-weight mixture of the per-state loss distributions.
    std::vector<LossDistribution> dists(spectra.size());
    parallel_for(static_cast<int>(spectra.size()), config.threads,
                 [&](int i) { dists[i] = loss_pdf(spectra[i]); });
    const auto mixture_cdf = [&](double x) {
        double sum = 0.0;
        for (const auto& dist : dists) {
            sum += dist.cdf(x);
        }
        return sum / static_cast<double>(dists.size());
    };
    const KsResult ks = ks_test(samples, mixture_cdf);

    double theory_mean = 0.0;
    double max_range = 0.0;
    for (const auto& spectrum : spectra) {
        theory_mean += spectrum.total();
        max_range = std::max(max_range, 20.0 * spectrum.total());
    }
    theory_mean /= static_cast<double>(spectra.size());

    CsvTable spectra_table;
    stamp(spectra_table, "validate", config, config.model, config.physics, k0, n_ph);
    spectra_table.meta("mode", config.validate.mode);
    spectra_table.header = {"state_id", "j", "d_j"};
    for (std::size_t s = 0; s < spectra.size(); ++s) {
        for (int j = 0; j < spectra[s].nu; ++j) {
            spectra_table.rows.push_back(
                {std::to_string(s), std::to_string(j), format_number(spectra[s].d[j])});
        }
    }
    spectra_table.write(out_path(config, "loss_spectra.csv").string());

    CsvTable sample_table;
    stamp(sample_table, "validate", config, config.model, config.physics, k0, n_ph);
    sample_table.meta("mode", config.validate.mode);
    sample_table.header = {"sample_id", "one_minus_F"};
    for (std::size_t i = 0; i < samples.size(); ++i) {
        sample_table.rows.push_back({std::to_string(i), format_number(samples[i])});
    }
    sample_table.write(out_path(config, "validate_samples.csv").string());

    const int bins = 40;
    double sample_max = 0.0;
    for (double v : samples) {
        sample_max = std::max(sample_max, v);
    }
    const double bin_width = sample_max > 0.0 ? 1.05 * sample_max / bins : 1.0;
    std::vector<double> histogram(bins, 0.0);
    for (double v : samples) {
        const int bin = std::min(bins - 1, static_cast<int>(v / bin_width));
        histogram[bin] += 1.0;
    }
    CsvTable hist_table;
    stamp(hist_table, "validate", config, config.model, config.physics, k0, n_ph);
    hist_table.header = {"one_minus_F", "empirical_density"};
    for (int b = 0; b < bins; ++b) {
        hist_table.rows.push_back(
            {format_number((b + 0.5) * bin_width),
             format_number(histogram[b] / (samples.size() * bin_width))});
    }
    hist_table.write(out_path(config, "validate_hist.csv").string());

    CsvTable theory_table;
    stamp(theory_table, "validate", config, config.model, config.physics, k0, n_ph);
    theory_table.header = {"one_minus_F", "density"};
    const int curve_points = 512;
    for (int i = 0; i < curve_points; ++i) {
        const double x = (i + 0.5) * max_range / curve_points;
        double density = 0.0;
        for (const auto& dist : dists) {
            density += density_at(dist, x);
        }
        theory_table.rows.push_back(
            {format_number(x), format_number(density / static_cast<double>(dists.size()))});
    }
    theory_table.write(out_path(config, "validate_theory.csv").string());

    MetricMap metrics{{"reconstructions", static_cast<double>(samples.size())},
                      {"mean_one_minus_F", mean(samples)},
                      {"theory_mean_one_minus_F", theory_mean},
                      {"ks_statistic", ks.statistic},
                      {"ks_p", ks.p_value},
                      {"k0", static_cast<double>(k0)},
                      {"n_ph", static_cast<double>(n_ph)}};
    CsvTable summary;
    stamp(summary, "validate", config, config.model, config.physics, k0, n_ph);
    summary.meta("mode", config.validate.mode);
    summary.header = {"reconstructions", "mean_one_minus_F", "theory_mean_one_minus_F",
                      "ks_statistic", "ks_p"};
    summary.rows.push_back({format_number(metrics["reconstructions"]),
                            format_number(metrics["mean_one_minus_F"]),
                            format_number(metrics["theory_mean_one_minus_F"]),
                            format_number(metrics["ks_statistic"]),
                            format_number(metrics["ks_p"])});
    summary.write(out_path(config, "validate_summary.csv").string());
    write_sidecar(config, "validate");
    return metrics;
}

MetricMap run_povm_dump(const ExperimentConfig& config) {
    const int k0 = resolve_k0(config, config.model, config.physics);
    const int n_ph = resolve_n_ph(config.model, config.physics, config.tail_tol);
    Povm povm = register_povm(config.model, config.physics, k0, config.tail_tol, config.qubits);
    std::string basis_label = "Z";
    if (config.dump_basis) {
        const MeasurementProtocol protocol = pauli_bases(config.qubits);
        bool found = false;
        for (const auto& basis : protocol.bases) {
            if (basis.label == *config.dump_basis) {
                povm = rotate_povm(basis, povm);
                basis_label = basis.label;
                found = true;
                break;
            }
        }
        if (!found) {
            throw ConfigError("dump_basis '" + *config.dump_basis + "' is not in the protocol");
        }
    }

    CsvTable table;
    stamp(table, "povm-dump", config, config.model, config.physics, k0, n_ph);
    table.meta("basis", basis_label);
    table.header = {"label"};
    for (int r = 0; r < povm.dim; ++r) {
        for (int c = 0; c < povm.dim; ++c) {
            table.header.push_back("re_" + std::to_string(r) + "_" + std::to_string(c));
            table.header.push_back("im_" + std::to_string(r) + "_" + std::to_string(c));
        }
    }
    for (const auto& effect : povm.effects) {
        std::vector<std::string> row{label_to_string(effect.label)};
        for (int r = 0; r < povm.dim; ++r) {
            for (int c = 0; c < povm.dim; ++c) {
                row.push_back(format_number(effect.matrix(r, c).real()));
                row.push_back(format_number(effect.matrix(r, c).imag()));
            }
        }
        table.rows.push_back(std::move(row));
    }
    table.write(out_path(config, "povm.csv").string());
    write_sidecar(config, "povm-dump");
    return MetricMap{{"effects", static_cast<double>(povm.size())},
                     {"dim", static_cast<double>(povm.dim)},
                     {"k0", static_cast<double>(k0)},
                     {"n_ph", static_cast<double>(n_ph)}};
}

std::string dataset_csv(const Dataset& dataset, const ReadoutPhysics& phys) {
    CsvTable table;
    table.meta("model", model_name(dataset.model));
    table.meta("seed", std::to_string(dataset.seed));
    table.meta("total_shots", dataset.total_shots);
    table.meta("exposure_t", phys.exposure);
    table.meta("decay_rate_lambda", phys.decay_rate);
    table.meta("bright_rate_lambda_B", phys.bright_rate);
    table.meta("dark_rate_lambda_D", phys.dark_rate);
    if (dataset.threshold_k0 > 0) {
        table.meta("k0", static_cast<double>(dataset.threshold_k0));
    }
    table.header = {"basis_label", "outcome_label", "count"};
    for (const auto& record : dataset.records) {
        for (const auto& [label, count] : record.counts) {
            table.rows.push_back({record.basis_label, label_to_string(label),
                                  format_number(count)});
        }
    }
    return table.to_string();
}

std::vector<std::string> evaluate_checks(const ExperimentConfig& config,
                                         const MetricMap& metrics) {
    std::vector<std::string> failures;
    for (const auto& [name, bounds] : config.checks) {
        const auto it = metrics.find(name);
        if (it == metrics.end()) {
            failures.push_back("check '" + name + "': no such metric in this command's output");
            continue;
        }
        if (it->second < bounds.first || it->second > bounds.second) {
            failures.push_back("check '" + name + "': value " + format_number(it->second) +
                               " outside [" + format_number(bounds.first) + ", " +
                               format_number(bounds.second) + "]");
        }
    }
    return failures;
}

}  // namespace iontomo
