#pragma once

#include <charconv>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "fara/config.hpp"
#include "fara/engine.hpp"
#include "fara/errors.hpp"

namespace fara {

// Locale-independent number text: up to 9 significant digits via
// std::to_chars, '.' decimal separator always.
inline std::string format_value(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v,
                                   std::chars_format::general, 9);
    return std::string(buf, res.ptr);
}

inline std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[static_cast<std::size_t>(i)] = digits[v & 0xf];
        v >>= 4;
    }
    return s;
}

inline constexpr const char* kCsvHeader =
    "pulse,static_regret_mean,static_ci_low,static_ci_high,"
    "universal_regret_mean,universal_ci_low,universal_ci_high,sinr_norm_mean";

inline void write_result_csv(const std::filesystem::path& path,
                             const AggregateResult& agg) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open output file '" + path.string() + "'");
    out << kCsvHeader << "\n";
    for (std::int64_t n = 1; n <= agg.pulses; ++n) {
        const auto i = static_cast<std::size_t>(n - 1);
        out << n << ',' << format_value(agg.static_mean[i]) << ','
            << format_value(agg.static_lo[i]) << ',' << format_value(agg.static_hi[i]) << ','
            << format_value(agg.universal_mean[i]) << ',' << format_value(agg.universal_lo[i])
            << ',' << format_value(agg.universal_hi[i]) << ','
            << format_value(agg.sinr_mean[i]) << '\n';
    }
    if (!out) throw Error("failed writing '" + path.string() + "'");
}

struct ExperimentResult {
    std::filesystem::path output_dir;
    std::vector<std::pair<Algorithm, AggregateResult>> per_algorithm;
    double runtime_seconds = 0.0;
    std::string config_digest;
};

// Run every configured algorithm against the configured jammer and write
//   <algo>_<env>.csv   per-pulse aggregate curves
//   summary.json       final-pulse values, per-trial stream seeds, runtime
//   effective.config   the fully resolved configuration
inline ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    ExperimentSetup setup = build_setup(cfg);

    std::filesystem::path outdir(cfg.output_dir);
    std::error_code ec;
    std::filesystem::create_directories(outdir, ec);
    if (ec) throw Error("cannot create output directory '" + outdir.string() + "'");

    const std::string effective = effective_config_text(cfg);
    {
        std::ofstream out(outdir / "effective.config", std::ios::binary);
        if (!out) throw Error("cannot write effective.config");
        out << effective;
    }

    ExperimentResult result;
    result.output_dir = outdir;
    result.config_digest = hex64(fnv1a64(effective));

    nlohmann::json summary;
    summary["schema_version"] = cfg.schema_version;
    summary["environment"] = cfg.environment_label();
    summary["pulses"] = cfg.pulses;
    summary["trials"] = cfg.trials;
    summary["confidence"] = cfg.confidence;
    summary["base_seed"] = cfg.seed;
    summary["config_digest_fnv1a64"] = result.config_digest;
    summary["seed_derivation"] =
        "mt19937_64 seeded with splitmix64(splitmix64(base) ^ splitmix64(2*trial + role)); "
        "role 0 = radar stream, role 1 = jammer stream";
    {
        nlohmann::json seeds = nlohmann::json::array();
        for (std::int64_t t = 0; t < cfg.trials; ++t) {
            seeds.push_back({{"trial", t},
                             {"radar", derive_stream_seed(cfg.seed, static_cast<std::uint64_t>(t),
                                                          StreamRole::Radar)},
                             {"jammer", derive_stream_seed(cfg.seed, static_cast<std::uint64_t>(t),
                                                           StreamRole::Jammer)}});
        }
        summary["trial_stream_seeds"] = std::move(seeds);
    }

    nlohmann::json finals = nlohmann::json::object();
    for (Algorithm algo : cfg.algorithms) {
        TrialConfig tc;
        tc.radar = &setup.radar;
        tc.jammer_set = &setup.jammer_set;
        tc.cost = &setup.cost;
        tc.algorithm = algo;
        tc.learning_rate = cfg.learning_rate;
        tc.pulses = cfg.pulses;
        tc.opponent_model = cfg.opponent_model;
        tc.iwe_uniform_mix = cfg.iwe_uniform_mix;
        tc.history_depth = setup.history_depth;

        AggregateResult agg =
            run_trials(tc, setup.jammer, cfg.seed, cfg.trials, cfg.confidence, cfg.threads);

        const std::string name =
            std::string(algorithm_name(algo)) + "_" + cfg.environment_label() + ".csv";
        write_result_csv(outdir / name, agg);

        const auto last = static_cast<std::size_t>(agg.pulses - 1);
        finals[algorithm_name(algo)] = {
            {"csv", name},
            {"learning_rate", tc.resolved_learning_rate()},
            {"static_regret_mean", agg.static_mean[last]},
            {"static_ci", {agg.static_lo[last], agg.static_hi[last]}},
            {"universal_regret_mean", agg.universal_mean[last]},
            {"universal_ci", {agg.universal_lo[last], agg.universal_hi[last]}},
            {"sinr_norm_mean", agg.sinr_mean[last]},
        };
        result.per_algorithm.emplace_back(algo, std::move(agg));
    }
    summary["final_pulse"] = std::move(finals);

    const auto t1 = std::chrono::steady_clock::now();
    result.runtime_seconds = std::chrono::duration<double>(t1 - t0).count();
    summary["runtime_seconds"] = result.runtime_seconds;

    {
        std::ofstream out(outdir / "summary.json", std::ios::binary);
        if (!out) throw Error("cannot write summary.json");
        out << summary.dump(2) << "\n";
    }
    return result;
}

}  // namespace fara
