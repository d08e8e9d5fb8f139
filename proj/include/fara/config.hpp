#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fara/domain.hpp"
#include "fara/engine.hpp"
#include "fara/errors.hpp"
#include "fara/jammer.hpp"
#include "fara/link_budget.hpp"

namespace fara {

enum class JammerType { Stationary, HistoryRule };

// One experiment, fully resolved. See README for the config file schema.
struct ExperimentConfig {
    int schema_version = 1;

    // [frequencies]
    double base_hz = 10e9;
    double step_hz = 10e6;
    int frequency_count = 4;  // L

    // [radar]
    int subpulses = 4;  // M
    LinkBudgetParams link;

    // [jammer]
    JammerType jammer_type = JammerType::Stationary;
    std::vector<double> stationary_weights;  // |A_J| entries
    HistoryRuleJammer history_rule;

    // [special_actions]
    struct SpecialActionSpec {
        std::string name;
        std::vector<double> column;  // 1 entry (constant) or L^M entries
    };
    std::vector<SpecialActionSpec> special_actions;

    // [opponent_model]
    OpponentModelConfig opponent_model;

    // [run]
    std::vector<Algorithm> algorithms = {Algorithm::Iwe, Algorithm::Ame, Algorithm::Ome};
    std::int64_t pulses = 1000;
    std::int64_t trials = 500;
    std::uint64_t seed = 1;
    double confidence = 0.95;
    std::string output_dir = "out";
    std::int64_t size_cap = kDefaultActionSpaceCap;
    int threads = 0;
    double learning_rate = 0.0;    // 0 = per-algorithm default
    double iwe_uniform_mix = 0.0;

    std::string environment_label() const {
        return jammer_type == JammerType::Stationary ? "stationary" : "nonstationary";
    }
};

namespace cfgdetail {

struct RawValue {
    std::string text;
    int line = 0;
    bool used = false;
};

using Section = std::map<std::string, RawValue>;

struct RawConfig {
    std::map<std::string, Section> sections;  // "" is the preamble
    std::string path;
};

inline std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

inline RawConfig parse_raw(std::istream& in, const std::string& path) {
    RawConfig raw;
    raw.path = path;
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string t = trim(line);
        if (t.empty()) continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw ConfigError(path + ":" + std::to_string(lineno) +
                                  ": malformed section header '" + t + "'");
            section = trim(t.substr(1, t.size() - 2));
            raw.sections[section];
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(lineno) +
                              ": expected 'key = value', got '" + t + "'");
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key.empty())
            throw ConfigError(path + ":" + std::to_string(lineno) + ": empty key");
        auto [it, inserted] = raw.sections[section].try_emplace(key, RawValue{value, lineno});
        if (!inserted)
            throw ConfigError(path + ":" + std::to_string(lineno) + ": duplicate key '" +
                              section + "." + key + "' (first at line " +
                              std::to_string(it->second.line) + ")");
    }
    return raw;
}

class Reader {
public:
    explicit Reader(RawConfig& raw) : raw_(raw) {}

    std::optional<std::string> get(const std::string& section, const std::string& key) {
        auto sit = raw_.sections.find(section);
        if (sit == raw_.sections.end()) return std::nullopt;
        auto kit = sit->second.find(key);
        if (kit == sit->second.end()) return std::nullopt;
        kit->second.used = true;
        return kit->second.text;
    }

    std::string require(const std::string& section, const std::string& key) {
        auto v = get(section, key);
        if (!v)
            throw ConfigError(raw_.path + ": missing required key '" + qualified(section, key) + "'");
        return *v;
    }

    double number(const std::string& section, const std::string& key, const std::string& text) {
        try {
            std::size_t pos = 0;
            const double v = std::stod(text, &pos);
            if (pos != text.size()) throw std::invalid_argument("trailing characters");
            return v;
        } catch (const std::exception&) {
            throw ConfigError(raw_.path + ":" + std::to_string(line(section, key)) +
                              ": key '" + qualified(section, key) + "' is not a number: '" +
                              text + "'");
        }
    }

    double require_number(const std::string& section, const std::string& key) {
        return number(section, key, require(section, key));
    }

    double number_or(const std::string& section, const std::string& key, double fallback) {
        auto v = get(section, key);
        return v ? number(section, key, *v) : fallback;
    }

    std::int64_t integer(const std::string& section, const std::string& key,
                         const std::string& text) {
        const double v = number(section, key, text);
        const auto i = static_cast<std::int64_t>(v);
        if (static_cast<double>(i) != v)
            throw ConfigError(raw_.path + ":" + std::to_string(line(section, key)) +
                              ": key '" + qualified(section, key) + "' must be an integer");
        return i;
    }

    std::int64_t require_integer(const std::string& section, const std::string& key) {
        return integer(section, key, require(section, key));
    }

    std::int64_t integer_or(const std::string& section, const std::string& key,
                            std::int64_t fallback) {
        auto v = get(section, key);
        return v ? integer(section, key, *v) : fallback;
    }

    bool boolean_or(const std::string& section, const std::string& key, bool fallback) {
        auto v = get(section, key);
        if (!v) return fallback;
        if (*v == "true" || *v == "1") return true;
        if (*v == "false" || *v == "0") return false;
        throw ConfigError(raw_.path + ":" + std::to_string(line(section, key)) + ": key '" +
                          qualified(section, key) + "' must be true or false");
    }

    std::vector<double> number_list(const std::string& section, const std::string& key,
                                    const std::string& text) {
        std::vector<double> out;
        std::istringstream iss(text);
        std::string tok;
        while (iss >> tok) out.push_back(number(section, key, tok));
        return out;
    }

    int line(const std::string& section, const std::string& key) const {
        auto sit = raw_.sections.find(section);
        if (sit == raw_.sections.end()) return 0;
        auto kit = sit->second.find(key);
        return kit == sit->second.end() ? 0 : kit->second.line;
    }

    // Every key must have been consumed; unknown keys are rejected by name.
    void reject_unused(const std::set<std::string>& free_form_sections) const {
        for (const auto& [section, entries] : raw_.sections) {
            if (free_form_sections.count(section)) continue;
            for (const auto& [key, value] : entries)
                if (!value.used)
                    throw ConfigError(raw_.path + ":" + std::to_string(value.line) +
                                      ": unknown key '" + qualified(section, key) + "'");
        }
    }

    static std::string qualified(const std::string& section, const std::string& key) {
        return section.empty() ? key : section + "." + key;
    }

private:
    RawConfig& raw_;
};

}  // namespace cfgdetail

inline Algorithm parse_algorithm(const std::string& name) {
    if (name == "iwe") return Algorithm::Iwe;
    if (name == "ame") return Algorithm::Ame;
    if (name == "ome") return Algorithm::Ome;
    throw ConfigError("unknown algorithm '" + name + "' (expected iwe, ame or ome)");
}

inline ExperimentConfig load_config_stream(std::istream& in, const std::string& path) {
    auto raw = cfgdetail::parse_raw(in, path);
    cfgdetail::Reader r(raw);
    ExperimentConfig cfg;

    cfg.schema_version = static_cast<int>(r.require_integer("", "schema_version"));
    if (cfg.schema_version != 1)
        throw ConfigError(path + ": unsupported schema_version " +
                          std::to_string(cfg.schema_version));

    cfg.base_hz = r.require_number("frequencies", "base_hz");
    cfg.step_hz = r.require_number("frequencies", "step_hz");
    cfg.frequency_count = static_cast<int>(r.require_integer("frequencies", "count"));

    cfg.subpulses = static_cast<int>(r.require_integer("radar", "subpulses"));
    cfg.link.radar_tx_power_w = r.require_number("radar", "tx_power_w");
    cfg.link.radar_antenna_gain_db = r.require_number("radar", "antenna_gain_db");
    cfg.link.flat_echo = r.boolean_or("radar", "flat_echo", false);
    cfg.link.carrier_frequency_hz = cfg.base_hz;

    cfg.link.jammer_tx_power_w = r.require_number("jammer_link", "tx_power_w");
    cfg.link.jammer_antenna_gain_db = r.number_or("jammer_link", "antenna_gain_db", 10.0);

    cfg.link.target_rcs_m2 = r.number_or("environment", "target_rcs_m2", 1.0);
    cfg.link.distance_m = r.require_number("environment", "distance_m");
    cfg.link.noise_temperature_k = r.number_or("environment", "noise_temperature_k", 290.0);
    cfg.link.noise_figure_db = r.number_or("environment", "noise_figure_db", 3.0);
    cfg.link.subpulse_width_s = r.require_number("environment", "subpulse_width_s");
    cfg.link.sinr_threshold = r.require_number("environment", "sinr_threshold");

    const std::string jtype = r.require("jammer", "type");
    if (jtype == "stationary") {
        cfg.jammer_type = JammerType::Stationary;
        cfg.stationary_weights =
            r.number_list("jammer", "weights", r.require("jammer", "weights"));
    } else if (jtype == "history_rule") {
        cfg.jammer_type = JammerType::HistoryRule;
        cfg.history_rule.depth = static_cast<int>(r.integer_or("jammer", "depth", 3));
        cfg.history_rule.top_weight = r.number_or("jammer", "top_weight", 0.7);
        cfg.history_rule.second_weight = r.number_or("jammer", "second_weight", 0.3);
        cfg.history_rule.validate();
    } else {
        throw ConfigError(path + ":" + std::to_string(r.line("jammer", "type")) +
                          ": jammer.type must be 'stationary' or 'history_rule', got '" +
                          jtype + "'");
    }

    if (raw.sections.count("special_actions")) {
        for (auto& [name, value] : raw.sections["special_actions"]) {
            value.used = true;
            ExperimentConfig::SpecialActionSpec spec;
            spec.name = name;
            spec.column = r.number_list("special_actions", name, value.text);
            if (spec.column.empty())
                throw ConfigError(path + ":" + std::to_string(value.line) +
                                  ": special action '" + name + "' has an empty cost column");
            cfg.special_actions.push_back(std::move(spec));
        }
    }

    cfg.opponent_model.depth =
        static_cast<int>(r.integer_or("opponent_model", "depth", 3));
    if (auto feat = r.get("opponent_model", "feature")) {
        if (*feat == "frequency_histogram")
            cfg.opponent_model.feature = FeatureMode::FrequencyHistogram;
        else if (*feat == "full_history")
            cfg.opponent_model.feature = FeatureMode::FullHistory;
        else
            throw ConfigError(path + ":" + std::to_string(r.line("opponent_model", "feature")) +
                              ": opponent_model.feature must be 'frequency_histogram' or "
                              "'full_history', got '" + *feat + "'");
    }

    {
        std::istringstream iss(r.require("run", "algorithms"));
        std::string tok;
        cfg.algorithms.clear();
        while (iss >> tok) cfg.algorithms.push_back(parse_algorithm(tok));
        if (cfg.algorithms.empty())
            throw ConfigError(path + ": run.algorithms lists no algorithms");
    }
    cfg.pulses = r.require_integer("run", "pulses");
    cfg.trials = r.require_integer("run", "trials");
    cfg.seed = static_cast<std::uint64_t>(r.require_integer("run", "seed"));
    cfg.confidence = r.number_or("run", "confidence", 0.95);
    if (auto v = r.get("run", "output_dir")) cfg.output_dir = *v;
    cfg.size_cap = r.integer_or("run", "size_cap", kDefaultActionSpaceCap);
    cfg.threads = static_cast<int>(r.integer_or("run", "threads", 0));
    cfg.learning_rate = r.number_or("run", "learning_rate", 0.0);
    cfg.iwe_uniform_mix = r.number_or("run", "iwe_uniform_mix", 0.0);

    r.reject_unused({"special_actions"});

    if (cfg.frequency_count < 2)
        throw ConfigError(path + ": frequencies.count must be >= 2");
    if (cfg.subpulses < 1) throw ConfigError(path + ": radar.subpulses must be >= 1");
    if (cfg.pulses < 1) throw ConfigError(path + ": run.pulses must be >= 1");
    if (cfg.trials < 1) throw ConfigError(path + ": run.trials must be >= 1");
    if (!(cfg.confidence > 0.0 && cfg.confidence < 1.0))
        throw ConfigError(path + ": run.confidence must be in (0, 1)");
    if (cfg.size_cap < 1) throw ConfigError(path + ": run.size_cap must be >= 1");
    if (cfg.learning_rate < 0.0)
        throw ConfigError(path + ": run.learning_rate must be >= 0");
    if (!(cfg.iwe_uniform_mix >= 0.0 && cfg.iwe_uniform_mix < 1.0))
        throw ConfigError(path + ": run.iwe_uniform_mix must be in [0, 1)");
    if (cfg.opponent_model.depth < 0)
        throw ConfigError(path + ": opponent_model.depth must be >= 0");
    cfg.link.validate();
    return cfg;
}

inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    return load_config_stream(in, path);
}

// The validated simulation objects built from a config.
struct ExperimentSetup {
    RadarActionSet radar;
    JammerActionSet jammer_set;
    ReceivedPowers powers;
    CostMatrix cost;
    Jammer jammer;
    int history_depth = 3;
};

inline ExperimentSetup build_setup(const ExperimentConfig& cfg) {
    ExperimentSetup s;
    FrequencySet freqs(cfg.base_hz, cfg.step_hz, cfg.frequency_count);
    s.radar = RadarActionSet(freqs, cfg.subpulses);
    if (s.radar.size > cfg.size_cap)
        throw ConfigError("action space too large: L=" + std::to_string(cfg.frequency_count) +
                          ", M=" + std::to_string(cfg.subpulses) + " gives L^M=" +
                          std::to_string(s.radar.size) + " > cap " +
                          std::to_string(cfg.size_cap));

    std::vector<SpecialAction> specials;
    for (const auto& spec : cfg.special_actions) {
        SpecialAction sa;
        sa.name = spec.name;
        if (spec.column.size() == 1)
            sa.cost_column.assign(static_cast<std::size_t>(s.radar.size), spec.column[0]);
        else if (static_cast<std::int64_t>(spec.column.size()) == s.radar.size)
            sa.cost_column = spec.column;
        else
            throw ConfigError("special action '" + spec.name + "' cost column has " +
                              std::to_string(spec.column.size()) + " entries, expected 1 or " +
                              std::to_string(s.radar.size));
        for (double v : sa.cost_column)
            if (!(v >= 0.0 && v <= 1.0))
                throw ConfigError("special action '" + spec.name +
                                  "' cost column entry outside [0, 1]");
        specials.push_back(std::move(sa));
    }
    s.jammer_set = JammerActionSet(s.radar, std::move(specials));

    s.powers = compute_received_powers(cfg.link, freqs);
    s.cost = build_cost_matrix(s.radar, s.jammer_set, s.powers, cfg.link.sinr_threshold,
                               cfg.size_cap);

    if (cfg.jammer_type == JammerType::Stationary) {
        if (static_cast<std::int64_t>(cfg.stationary_weights.size()) != s.jammer_set.size())
            throw ConfigError("jammer.weights has " +
                              std::to_string(cfg.stationary_weights.size()) +
                              " entries, expected |A_J| = " +
                              std::to_string(s.jammer_set.size()));
        Strategy y = Strategy::from_weights(cfg.stationary_weights);
        y.renormalize();
        s.jammer = StationaryJammer{std::move(y)};
        s.history_depth = std::max(1, cfg.opponent_model.depth);
    } else {
        s.jammer = cfg.history_rule;
        s.history_depth = std::max({1, cfg.history_rule.depth, cfg.opponent_model.depth});
    }
    return s;
}

// Canonical text of a resolved config; echoed next to the results so a run
// can be reproduced from its output directory alone.
inline std::string effective_config_text(const ExperimentConfig& cfg) {
    std::ostringstream os;
    os.setf(std::ios::fmtflags(0), std::ios::floatfield);
    os.precision(17);
    os << "schema_version = " << cfg.schema_version << "\n\n";
    os << "[frequencies]\n";
    os << "base_hz = " << cfg.base_hz << "\n";
    os << "step_hz = " << cfg.step_hz << "\n";
    os << "count = " << cfg.frequency_count << "\n\n";
    os << "[radar]\n";
    os << "subpulses = " << cfg.subpulses << "\n";
    os << "tx_power_w = " << cfg.link.radar_tx_power_w << "\n";
    os << "antenna_gain_db = " << cfg.link.radar_antenna_gain_db << "\n";
    os << "flat_echo = " << (cfg.link.flat_echo ? "true" : "false") << "\n\n";
    os << "[jammer_link]\n";
    os << "tx_power_w = " << cfg.link.jammer_tx_power_w << "\n";
    os << "antenna_gain_db = " << cfg.link.jammer_antenna_gain_db << "\n\n";
    os << "[environment]\n";
    os << "target_rcs_m2 = " << cfg.link.target_rcs_m2 << "\n";
    os << "distance_m = " << cfg.link.distance_m << "\n";
    os << "noise_temperature_k = " << cfg.link.noise_temperature_k << "\n";
    os << "noise_figure_db = " << cfg.link.noise_figure_db << "\n";
    os << "subpulse_width_s = " << cfg.link.subpulse_width_s << "\n";
    os << "sinr_threshold = " << cfg.link.sinr_threshold << "\n\n";
    os << "[jammer]\n";
    if (cfg.jammer_type == JammerType::Stationary) {
        os << "type = stationary\n";
        os << "weights =";
        for (double w : cfg.stationary_weights) os << " " << w;
        os << "\n";
    } else {
        os << "type = history_rule\n";
        os << "depth = " << cfg.history_rule.depth << "\n";
        os << "top_weight = " << cfg.history_rule.top_weight << "\n";
        os << "second_weight = " << cfg.history_rule.second_weight << "\n";
    }
    if (!cfg.special_actions.empty()) {
        os << "\n[special_actions]\n";
        for (const auto& spec : cfg.special_actions) {
            os << spec.name << " =";
            for (double v : spec.column) os << " " << v;
            os << "\n";
        }
    }
    os << "\n[opponent_model]\n";
    os << "feature = "
       << (cfg.opponent_model.feature == FeatureMode::FrequencyHistogram
               ? "frequency_histogram"
               : "full_history")
       << "\n";
    os << "depth = " << cfg.opponent_model.depth << "\n\n";
    os << "[run]\n";
    os << "algorithms =";
    for (Algorithm a : cfg.algorithms) os << " " << algorithm_name(a);
    os << "\n";
    os << "pulses = " << cfg.pulses << "\n";
    os << "trials = " << cfg.trials << "\n";
    os << "seed = " << cfg.seed << "\n";
    os << "confidence = " << cfg.confidence << "\n";
    os << "output_dir = " << cfg.output_dir << "\n";
    os << "size_cap = " << cfg.size_cap << "\n";
    os << "threads = " << cfg.threads << "\n";
    os << "learning_rate = " << cfg.learning_rate << "\n";
    os << "iwe_uniform_mix = " << cfg.iwe_uniform_mix << "\n";
    return os.str();
}

}  // namespace fara
