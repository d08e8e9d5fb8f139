// Command-line driver: validate experiment configs and run experiments.
// Exit codes: 0 success, 1 configuration error, 2 runtime error.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fara/config.hpp"
#include "fara/experiment.hpp"

namespace {

struct RunOverrides {
    std::string config_path;
    std::string out_dir;
    std::int64_t trials = -1;
    std::int64_t pulses = -1;
    std::int64_t seed = -1;
    std::vector<std::string> algorithms;
    int threads = -1;
};

fara::ExperimentConfig load_with_overrides(const RunOverrides& o) {
    fara::ExperimentConfig cfg = fara::load_config(o.config_path);
    if (!o.out_dir.empty()) cfg.output_dir = o.out_dir;
    if (o.trials >= 0) cfg.trials = o.trials;
    if (o.pulses >= 0) cfg.pulses = o.pulses;
    if (o.seed >= 0) cfg.seed = static_cast<std::uint64_t>(o.seed);
    if (o.threads >= 0) cfg.threads = o.threads;
    if (!o.algorithms.empty()) {
        cfg.algorithms.clear();
        for (const auto& name : o.algorithms)
            cfg.algorithms.push_back(fara::parse_algorithm(name));
    }
    if (cfg.trials < 1) throw fara::ConfigError("run.trials must be >= 1");
    if (cfg.pulses < 1) throw fara::ConfigError("run.pulses must be >= 1");
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Frequency-agile radar anti-jamming simulator"};
    app.require_subcommand(1);

    RunOverrides run_opts;
    auto* run = app.add_subcommand("run", "Run an experiment and write CSV/JSON results");
    run->add_option("--config", run_opts.config_path, "Experiment config file")->required();
    run->add_option("--out", run_opts.out_dir, "Output directory (overrides run.output_dir)");
    run->add_option("--trials", run_opts.trials, "Trial count override");
    run->add_option("--pulses", run_opts.pulses, "Pulse count override");
    run->add_option("--seed", run_opts.seed, "Base seed override");
    run->add_option("--algo", run_opts.algorithms, "Algorithm (iwe, ame, ome); repeatable")
        ->allow_extra_args(false);
    run->add_option("--threads", run_opts.threads, "Worker thread count (0 = hardware)");

    std::string validate_path;
    auto* validate = app.add_subcommand("validate", "Check a config without running");
    validate->add_option("--config", validate_path, "Experiment config file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate->parsed()) {
            fara::ExperimentConfig cfg = fara::load_config(validate_path);
            fara::build_setup(cfg);  // full validation incl. cost matrix
            std::cout << "ok: " << validate_path << "\n"
                      << "  environment: " << cfg.environment_label() << "\n"
                      << "  L=" << cfg.frequency_count << " M=" << cfg.subpulses
                      << " |A_R|=" << fara::RadarActionSet(
                             fara::FrequencySet(cfg.base_hz, cfg.step_hz, cfg.frequency_count),
                             cfg.subpulses).size
                      << "\n"
                      << "  pulses=" << cfg.pulses << " trials=" << cfg.trials
                      << " seed=" << cfg.seed << "\n";
            return 0;
        }
        fara::ExperimentConfig cfg = load_with_overrides(run_opts);
        fara::ExperimentResult result = fara::run_experiment(cfg);
        std::cout << "wrote " << result.per_algorithm.size() << " result file(s) to "
                  << result.output_dir.string() << " in " << result.runtime_seconds
                  << " s (config digest " << result.config_digest << ")\n";
        return 0;
    } catch (const fara::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
