#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "fara/config.hpp"
#include "fara/experiment.hpp"

using namespace fara;
namespace fs = std::filesystem;

namespace {

std::string smoke_config(const std::string& outdir, const std::string& extra = "") {
    std::ostringstream os;
    os << "schema_version = 1\n"
       << "[frequencies]\n"
       << "base_hz = 10e9\n"
       << "step_hz = 10e6\n"
       << "count = 4\n"
       << "[radar]\n"
       << "subpulses = 2\n"
       << "tx_power_w = 10e3\n"
       << "antenna_gain_db = 30\n"
       << "[jammer_link]\n"
       << "tx_power_w = 1e3\n"
       << "[environment]\n"
       << "distance_m = 100e3\n"
       << "subpulse_width_s = 3e-6\n"
       << "sinr_threshold = 0.01\n"
       << "[jammer]\n"
       << "type = history_rule\n"
       << "depth = 3\n"
       << "[opponent_model]\n"
       << "feature = frequency_histogram\n"
       << "depth = 3\n"
       << "[run]\n"
       << "algorithms = iwe ame ome\n"
       << "pulses = 100\n"
       << "trials = 10\n"
       << "seed = 42\n"
       << "output_dir = " << outdir << "\n"
       << extra;
    return os.str();
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("fara_test_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

fs::path write_file(const fs::path& dir, const std::string& name, const std::string& text) {
    const fs::path p = dir / name;
    std::ofstream out(p, std::ios::binary);
    out << text;
    return p;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

ExperimentConfig load_text(const std::string& text) {
    std::istringstream in(text);
    return load_config_stream(in, "<memory>");
}

}  // namespace

TEST_CASE("smoke config loads with expected values") {
    auto cfg = load_text(smoke_config("out"));
    CHECK(cfg.frequency_count == 4);
    CHECK(cfg.subpulses == 2);
    CHECK(cfg.pulses == 100);
    CHECK(cfg.trials == 10);
    CHECK(cfg.seed == 42);
    CHECK(cfg.jammer_type == JammerType::HistoryRule);
    CHECK(cfg.history_rule.top_weight == 0.7);
    CHECK(cfg.confidence == 0.95);
    CHECK(cfg.environment_label() == "nonstationary");
    CHECK(cfg.algorithms.size() == 3);
    CHECK_NOTHROW(build_setup(cfg));
}

TEST_CASE("an empty config names the first missing required key") {
    try {
        load_text("");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("schema_version") != std::string::npos);
    }
}

TEST_CASE("unknown keys are rejected with their path and line") {
    try {
        load_text(smoke_config("out", "[run]\nbogus_key = 1\n"));
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("run.bogus_key") != std::string::npos);
    }
    CHECK_THROWS_AS(load_text(smoke_config("out") + "mystery = 3\n"), ConfigError);
}

TEST_CASE("oversized action spaces are rejected at setup naming the cap") {
    auto text = smoke_config("out");
    auto pos = text.find("count = 4");
    text.replace(pos, 9, "count = 64");
    pos = text.find("subpulses = 2");
    text.replace(pos, 13, "subpulses = 8");
    auto cfg = load_text(text);
    try {
        build_setup(cfg);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("action space too large") != std::string::npos);
        CHECK(msg.find("L=64") != std::string::npos);
        CHECK(msg.find("M=8") != std::string::npos);
    }
}

TEST_CASE("config syntax errors carry line numbers") {
    CHECK_THROWS_AS(load_text("schema_version = 1\nnot a key value line\n"), ConfigError);
    CHECK_THROWS_AS(load_text("schema_version = 1\n[unclosed\n"), ConfigError);
    try {
        load_text("schema_version = 1\n\n= 3\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find(":3") != std::string::npos);
    }
}

TEST_CASE("duplicate keys are rejected") {
    CHECK_THROWS_AS(load_text(smoke_config("out", "[run]\npulses = 7\n")), ConfigError);
}

TEST_CASE("stationary jammers require matching weight vectors") {
    std::string text = smoke_config("out");
    auto pos = text.find("type = history_rule\ndepth = 3\n");
    text.replace(pos, std::string("type = history_rule\ndepth = 3\n").size(),
                 "type = stationary\nweights = 0.5 0.5\n");
    auto cfg = load_text(text);
    CHECK(cfg.jammer_type == JammerType::Stationary);
    CHECK(cfg.environment_label() == "stationary");
    CHECK_THROWS_AS(build_setup(cfg), ConfigError);  // needs 16 entries, got 2
}

TEST_CASE("special actions accept scalar or full columns") {
    auto cfg = load_text(smoke_config("out", "[special_actions]\nrepeater = 0.9\n"));
    auto setup = build_setup(cfg);
    CHECK(setup.jammer_set.size() == 17);
    CHECK(setup.cost.at(3, 16) == 0.9);

    CHECK_THROWS_AS(
        build_setup(load_text(smoke_config("out", "[special_actions]\nodd = 0.1 0.2 0.3\n"))),
        ConfigError);
    CHECK_THROWS_AS(
        build_setup(load_text(smoke_config("out", "[special_actions]\nbad = 1.5\n"))),
        ConfigError);
}

TEST_CASE("number formatting is locale-free with nine significant digits") {
    CHECK(format_value(1.0 / 3.0) == "0.333333333");
    CHECK(format_value(0.5) == "0.5");
    CHECK(format_value(-12345.6789) == "-12345.6789");
    CHECK(format_value(0.0) == "0");
    CHECK(format_value(1e-12) == "1e-12");
}

TEST_CASE("run_experiment writes csv, summary and effective config") {
    TempDir tmp;
    const auto out = tmp.path / "run1";
    auto cfg = load_text(smoke_config(out.string()));
    cfg.trials = 5;
    auto result = run_experiment(cfg);

    for (const char* name : {"iwe_nonstationary.csv", "ame_nonstationary.csv",
                             "ome_nonstationary.csv", "summary.json", "effective.config"})
        CHECK(fs::exists(out / name));

    const std::string csv = read_file(out / "ame_nonstationary.csv");
    std::istringstream lines(csv);
    std::string header;
    std::getline(lines, header);
    CHECK(header ==
          "pulse,static_regret_mean,static_ci_low,static_ci_high,universal_regret_mean,"
          "universal_ci_low,universal_ci_high,sinr_norm_mean");
    int rows = 0;
    std::string line;
    while (std::getline(lines, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 100);
    CHECK(csv.find(',') != std::string::npos);
    CHECK(csv.find(';') == std::string::npos);
    CHECK(csv.find('\r') == std::string::npos);

    auto summary = nlohmann::json::parse(read_file(out / "summary.json"));
    CHECK(summary["trials"] == 5);
    CHECK(summary["pulses"] == 100);
    CHECK(summary["base_seed"] == 42);
    CHECK(summary["trial_stream_seeds"].size() == 5);
    CHECK(summary["trial_stream_seeds"][0].contains("radar"));
    CHECK(summary["trial_stream_seeds"][0].contains("jammer"));
    CHECK(summary["final_pulse"].contains("ome"));
    CHECK(summary["config_digest_fnv1a64"].get<std::string>().size() == 16);

    // The echoed effective config reloads to an equivalent experiment.
    auto echoed = load_config((out / "effective.config").string());
    CHECK(echoed.pulses == cfg.pulses);
    CHECK(echoed.seed == cfg.seed);
    CHECK(echoed.jammer_type == cfg.jammer_type);
}

TEST_CASE("equal configs and seeds produce byte-identical csv output") {
    TempDir tmp;
    auto run = [&](const std::string& name, int threads) {
        const auto out = tmp.path / name;
        auto cfg = load_text(smoke_config(out.string()));
        cfg.trials = 6;
        cfg.pulses = 60;
        cfg.threads = threads;
        run_experiment(cfg);
        return out;
    };
    const auto a = run("a", 1);
    const auto b = run("b", 1);
    const auto c = run("c", 2);  // different parallel layout
    for (const char* name :
         {"iwe_nonstationary.csv", "ame_nonstationary.csv", "ome_nonstationary.csv"}) {
        const std::string bytes = read_file(a / name);
        REQUIRE_FALSE(bytes.empty());
        CHECK(bytes == read_file(b / name));
        CHECK(bytes == read_file(c / name));
    }
    CHECK(read_file(a / "effective.config") != "");
}

TEST_CASE("algorithm names parse and unknown ones are rejected") {
    CHECK(parse_algorithm("iwe") == Algorithm::Iwe);
    CHECK(parse_algorithm("ame") == Algorithm::Ame);
    CHECK(parse_algorithm("ome") == Algorithm::Ome);
    CHECK_THROWS_AS(parse_algorithm("exp3"), ConfigError);
}
