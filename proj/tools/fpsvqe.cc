// Command-line front end: one subcommand per experiment.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fpsvqe/config.h"
#include "fpsvqe/driver.h"
#include "fpsvqe/estimator.h"
#include "fpsvqe/pauli.h"
#include "fpsvqe/report.h"

namespace fs = std::filesystem;
using namespace fpsvqe;

namespace {

enum ExitCode { Ok = 0, Usage = 1, ConfigFailure = 2, ValidationFailure = 3, RuntimeFailure = 4 };

struct Options {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_dir = ".";
    bool print_config = false;

    // Shortcuts for the most common overrides.
    std::string seed, restarts, workers, mode, shots, basis, entangler, budget;
};

ExperimentConfig load(const Options &o) {
    KeyValueConfig kv = o.config_path.empty() ? KeyValueConfig{} : KeyValueConfig::load(o.config_path);
    auto shortcut = [&](const char *key, const std::string &v) {
        if (!v.empty()) {
            kv.set(key, v);
        }
    };
    shortcut("run.seed", o.seed);
    shortcut("run.restarts", o.restarts);
    shortcut("run.workers", o.workers);
    shortcut("estimator.mode", o.mode);
    shortcut("estimator.shots", o.shots);
    shortcut("basis.kept", o.basis);
    shortcut("ansatz.entangler", o.entangler);
    shortcut("optimizer.budget", o.budget);
    for (const auto &s : o.overrides) {
        kv.assign(s);
    }
    ExperimentConfig cfg = experiment_from(kv);
    if (o.print_config) {
        to_key_values(cfg).write(std::cerr);
    }
    return cfg;
}

fs::path output(const Options &o, const std::string &name) {
    fs::create_directories(o.out_dir);
    return fs::path(o.out_dir) / name;
}

void write_file(const fs::path &path, const std::string &text) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write '" + path.string() + "'");
    }
    out << text;
}

template <class F>
void write_file_with(const fs::path &path, F &&fill) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write '" + path.string() + "'");
    }
    fill(out);
}

void print_stats(const char *label, const EnsembleStats &s) {
    std::printf("%s  min %.6f  mean %.6f  ref %.6f  eps_min %.3f%%  eps_avg %.3f%%\n", label, s.min, s.mean,
                s.reference, s.eps_min, s.eps_avg);
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Rotor-chain Smoluchowski eigenvalues: classical reference and variational estimates"};
    app.fallthrough();
    app.require_subcommand(1);

    Options o;
    app.add_option("-c,--config", o.config_path, "key = value configuration file");
    app.add_option("-s,--set", o.overrides, "override one setting, key=value (repeatable)");
    app.add_option("-o,--out", o.out_dir, "directory for CSV/JSON outputs");
    app.add_flag("--print-config", o.print_config, "print the effective configuration to stderr");
    app.add_option("--seed", o.seed, "master seed (run.seed)");
    app.add_option("--restarts", o.restarts, "runs per ensemble (run.restarts)");
    app.add_option("--workers", o.workers, "concurrent runs (run.workers)");
    app.add_option("--mode", o.mode, "exact, sampled or noisy (estimator.mode)");
    app.add_option("--shots", o.shots, "shots per measurement setting (estimator.shots)");
    app.add_option("--basis", o.basis, "kept counts per dihedral, e.g. 4,2 (basis.kept)");
    app.add_option("--entangler", o.entangler, "linear or full (ansatz.entangler)");
    app.add_option("--budget", o.budget, "optimizer budget (optimizer.budget)");

    auto *keys = app.add_subcommand("keys", "list the configuration keys");

    auto *reference = app.add_subcommand("reference", "classical spectrum and rate constant");
    size_t levels = 5;
    std::string matrix_text, matrix_json;
    reference->add_option("--levels", levels, "eigenvalues to print");
    reference->add_option("--matrix-text", matrix_text, "write the operator matrix as text");
    reference->add_option("--matrix-json", matrix_json, "write the operator matrix as JSON");

    auto *map = app.add_subcommand("map", "Pauli decomposition and resource report");
    std::string operator_file = "operator.txt";
    map->add_option("--operator", operator_file, "file name for the Pauli terms, inside --out");

    auto *vqe = app.add_subcommand("vqe", "one variational optimization");
    uint64_t run_index = 0;
    std::string bitstring_basis;
    uint64_t bitstring_shots = 1000;
    vqe->add_option("--run-index", run_index, "run number within the seed stream");
    vqe->add_option("--bitstrings", bitstring_basis, "dump shots measured in this Pauli basis, e.g. ZZ");
    vqe->add_option("--bitstring-shots", bitstring_shots, "number of dumped shots");

    auto *ensemble = app.add_subcommand("ensemble", "restart ensemble statistics");
    auto *barrier = app.add_subcommand("barrier-scan", "ensembles over reactive barriers");
    auto *qubit = app.add_subcommand("qubit-scan", "ensembles over basis sizes");
    auto *hier = app.add_subcommand("hierarchical", "warm-started ladder of basis sizes");
    auto *dist = app.add_subcommand("dist-study", "repeated estimation at fixed parameters");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? Ok : Usage;
    }

    try {
        if (keys->parsed()) {
            for (const auto &[k, d] : config_keys()) {
                std::printf("%-26s %s\n", k.c_str(), d.c_str());
            }
            return Ok;
        }
        ExperimentConfig cfg = load(o);
        const VqeConfig &v = cfg.vqe;

        if (reference->parsed()) {
            Problem p = build_problem(v);
            auto spectrum = reference_spectrum(p.matrix);
            std::printf("basis size %zu, qubits %zu\n", p.basis.size(), p.basis.qubit_count);
            for (size_t i = 0; i < std::min(levels, spectrum.values.size()); i++) {
                std::printf("lambda[%zu] = %.10f\n", i + 1, spectrum.values[i]);
            }
            std::printf("rate constant k = %.10f\n", rate_constant(p.lambda_ref));
            write_file(output(o, "reference.json"), reference_json(p, levels));
            if (!matrix_text.empty()) {
                write_file_with(matrix_text, [&](std::ostream &out) { write_matrix_text(out, p.matrix); });
            }
            if (!matrix_json.empty()) {
                write_file(matrix_json, matrix_to_json(p.matrix) + "\n");
            }
        } else if (map->parsed()) {
            Problem p = build_problem(v);
            auto report = resource_report(p.basis);
            std::cout << resources_json(report);
            write_file_with(output(o, operator_file), [&](std::ostream &out) { write_operator_text(out, p.op); });
            write_file(output(o, "resources.json"), resources_json(report));
        } else if (vqe->parsed()) {
            Problem p = build_problem(v);
            VqeRun run = run_vqe(v, p, run_index);
            std::printf("lambda %.8f (exact at best params %.8f, reference %.8f), k = %.8f, %zu evaluations\n",
                        run.lambda, run.lambda_exact, p.lambda_ref, run.rate, run.trace.evaluations);
            write_file_with(output(o, "trace.csv"), [&](std::ostream &out) { write_trace_csv(out, run.trace); });
            write_file(output(o, "vqe.json"), vqe_json(run, p));
            if (!bitstring_basis.empty()) {
                PauliString basis = PauliString::parse(bitstring_basis);
                if (bitstring_basis.size() != p.ansatz.num_qubits) {
                    throw std::invalid_argument("--bitstrings: basis must have one letter per qubit");
                }
                auto shots = sample_bitstrings(p.ansatz, run.trace.best_params, basis, bitstring_shots,
                                               derive_seed(run.seed, 7));
                write_file_with(output(o, "bitstrings.txt"),
                                [&](std::ostream &out) { write_bitstrings(out, shots, p.ansatz.num_qubits); });
            }
        } else if (ensemble->parsed()) {
            auto result = run_ensemble(v);
            print_stats("ensemble", result.stats);
            write_file_with(output(o, "ensemble.csv"), [&](std::ostream &out) { write_ensemble_csv(out, result); });
            write_file(output(o, "ensemble.json"), ensemble_json(result, cfg));
        } else if (barrier->parsed()) {
            auto rows = run_barrier_scan(v, cfg.barriers);
            for (const auto &r : rows) {
                std::printf("barrier %.3f  ", r.barrier);
                print_stats("", r.stats);
            }
            write_file_with(output(o, "barrier_scan.csv"), [&](std::ostream &out) { write_barrier_scan_csv(out, rows); });
            write_file(output(o, "barrier_scan.json"), barrier_scan_json(rows));
        } else if (qubit->parsed()) {
            auto rows = run_qubit_scan(v, cfg.bases);
            for (const auto &r : rows) {
                std::printf("Q=%zu  ", r.qubits);
                print_stats("", r.stats);
            }
            write_file_with(output(o, "qubit_scan.csv"), [&](std::ostream &out) { write_qubit_scan_csv(out, rows); });
            write_file(output(o, "qubit_scan.json"), qubit_scan_json(rows));
        } else if (hier->parsed()) {
            auto rungs = run_hierarchical(v, cfg.bases);
            for (const auto &r : rungs) {
                std::printf("Q=%zu  ", r.qubits);
                print_stats("", r.stats);
            }
            write_file_with(output(o, "hierarchical.csv"), [&](std::ostream &out) { write_hierarchical_csv(out, rungs); });
            write_file(output(o, "hierarchical.json"), hierarchical_json(rungs));
        } else if (dist->parsed()) {
            std::vector<double> params = cfg.dist_params;
            if (params.empty()) {
                // Optimize once, noiselessly, and study the best parameters of that run.
                VqeConfig exact = v;
                exact.estimator.mode = EstimateMode::Exact;
                params = run_vqe(exact).trace.best_params;
            }
            auto study = run_distribution_study(v, params, cfg.dist_modes, cfg.dist_repetitions, cfg.dist_shots);
            std::printf("exact %.8f\n", study.exact_value);
            for (const auto &s : study.samples) {
                std::printf("%-8s mean %.8f  std %.8f  min %.8f\n", std::string(to_string(s.mode)).c_str(), s.mean,
                            s.stddev, s.min);
            }
            write_file_with(output(o, "dist_values.csv"), [&](std::ostream &out) { write_distribution_csv(out, study); });
            write_file(output(o, "dist_summary.json"), distribution_json(study));
        }
    } catch (const ConfigError &e) {
        std::fprintf(stderr, "%s\n", e.what());
        return ConfigFailure;
    } catch (const std::invalid_argument &e) {
        std::fprintf(stderr, "invalid input: %s\n", e.what());
        return ValidationFailure;
    } catch (const std::domain_error &e) {
        std::fprintf(stderr, "invalid input: %s\n", e.what());
        return ValidationFailure;
    } catch (const std::exception &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return RuntimeFailure;
    }
    return Ok;
}
