#include "meanfield/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "meanfield/io.hpp"

namespace meanfield {

namespace {

std::string trim(const std::string& s) {
    auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("config key " + key + ": not a number: " + value);
    }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        unsigned long long v = std::stoull(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("config key " + key + ": not a whole number: " + value);
    }
}

std::vector<double> parse_double_list(const std::string& key, const std::string& value) {
    std::vector<double> out;
    if (trim(value).empty()) return out;
    for (const std::string& part : split(value, ','))
        out.push_back(parse_double(key, trim(part)));
    return out;
}

}  // namespace

std::vector<double> parse_number_list(const std::string& text) {
    return parse_double_list("list", text);
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    if (trim(text).empty()) return out;
    for (const std::string& part : split(text, ',')) out.push_back(trim(part));
    return out;
}

std::string mode_name(RunMode mode) {
    switch (mode) {
        case RunMode::Finite: return "finite";
        case RunMode::Density: return "density";
        case RunMode::Scan: return "scan";
        case RunMode::Renorm: return "renorm";
        case RunMode::Verify: return "verify";
    }
    throw std::logic_error("unreachable");
}

RunMode mode_from_name(const std::string& name) {
    if (name == "finite") return RunMode::Finite;
    if (name == "density") return RunMode::Density;
    if (name == "scan") return RunMode::Scan;
    if (name == "renorm") return RunMode::Renorm;
    if (name == "verify") return RunMode::Verify;
    throw std::invalid_argument("unknown mode: " + name);
}

InitSpec parse_init(const std::string& text) {
    std::string t = trim(text);
    InitSpec spec;
    if (t == "uniform-random") {
        spec.kind = InitSpec::Kind::UniformRandom;
        return spec;
    }
    auto call = [&](const std::string& head) -> std::vector<double> {
        // head(...) with a comma list inside
        std::string inner = t.substr(head.size() + 1, t.size() - head.size() - 2);
        std::vector<double> args;
        for (const std::string& part : split(inner, ','))
            args.push_back(parse_double("init", trim(part)));
        return args;
    };
    if (t.rfind("bump(", 0) == 0 && t.back() == ')') {
        auto args = call("bump");
        if (args.size() != 2)
            throw std::invalid_argument("init bump(center,width) takes two arguments");
        spec.kind = InitSpec::Kind::Bump;
        spec.a = args[0];
        spec.b = args[1];
        return spec;
    }
    if (t.rfind("sine(", 0) == 0 && t.back() == ')') {
        auto args = call("sine");
        if (args.size() != 1)
            throw std::invalid_argument("init sine(amplitude) takes one argument");
        spec.kind = InitSpec::Kind::Sine;
        spec.a = args[0];
        return spec;
    }
    spec.kind = InitSpec::Kind::Explicit;
    spec.positions = parse_double_list("init", t);
    if (spec.positions.empty())
        throw std::invalid_argument("init: expected uniform-random, bump(c,w), "
                                    "sine(a), or a comma list of positions");
    return spec;
}

RunConfig parse_config_text(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        auto eq = t.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line is not key=value: " + t);
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        if (key == "mode") cfg.mode = mode_from_name(value);
        else if (key == "epsilon") cfg.epsilon = parse_double(key, value);
        else if (key == "epsilon_grid") cfg.epsilon_grid = parse_double_list(key, value);
        else if (key == "sites") cfg.sites = parse_u64(key, value);
        else if (key == "grid_size") cfg.grid_size = parse_u64(key, value);
        else if (key == "steps") cfg.steps = parse_u64(key, value);
        else if (key == "burn_in") cfg.burn_in = parse_u64(key, value);
        else if (key == "seed") cfg.seed = parse_u64(key, value);
        else if (key == "init") cfg.init = value;
        else if (key == "observables") {
            cfg.observables.clear();
            if (!value.empty())
                for (const std::string& part : split(value, ','))
                    cfg.observables.push_back(trim(part));
        }
        else if (key == "out_dir") cfg.out_dir = value;
        else throw std::invalid_argument("unknown config key: " + key);
    }
    return cfg;
}

std::string emit_config_text(const RunConfig& cfg) {
    std::ostringstream out;
    out << "mode=" << mode_name(cfg.mode) << "\n";
    out << "epsilon=" << format_double(cfg.epsilon) << "\n";
    out << "epsilon_grid=";
    for (std::size_t i = 0; i < cfg.epsilon_grid.size(); ++i)
        out << (i ? "," : "") << format_double(cfg.epsilon_grid[i]);
    out << "\n";
    out << "sites=" << cfg.sites << "\n";
    out << "grid_size=" << cfg.grid_size << "\n";
    out << "steps=" << cfg.steps << "\n";
    out << "burn_in=" << cfg.burn_in << "\n";
    out << "seed=" << cfg.seed << "\n";
    out << "init=" << cfg.init << "\n";
    out << "observables=";
    for (std::size_t i = 0; i < cfg.observables.size(); ++i)
        out << (i ? "," : "") << cfg.observables[i];
    out << "\n";
    out << "out_dir=" << cfg.out_dir << "\n";
    return out.str();
}

RunConfig load_config_file(const std::string& path) {
    return parse_config_text(read_file(path));
}

void validate_config(const RunConfig& cfg) {
    if (!(cfg.epsilon >= 0.0 && cfg.epsilon < 1.0))
        throw std::invalid_argument("epsilon: must lie in [0, 1)");
    for (double e : cfg.epsilon_grid)
        if (!(e >= 0.0 && e < 1.0))
            throw std::invalid_argument("epsilon_grid: entries must lie in [0, 1)");
    if (cfg.sites < 2) throw std::invalid_argument("sites: need at least 2");
    if (cfg.mode == RunMode::Density && cfg.grid_size < 16)
        throw std::invalid_argument("grid_size: too coarse");
    if (cfg.mode == RunMode::Scan && cfg.epsilon_grid.empty())
        throw std::invalid_argument("epsilon_grid: scan mode needs a grid");
    if (cfg.mode == RunMode::Finite && cfg.steps * cfg.sites > 10'000'000)
        throw std::invalid_argument("steps: orbit record would exceed 1e7 values");
    if (cfg.out_dir.empty()) throw std::invalid_argument("out_dir: must not be empty");
    parse_init(cfg.init);  // throws with its own message
    if (cfg.mode == RunMode::Finite) {
        InitSpec spec = parse_init(cfg.init);
        if (spec.kind == InitSpec::Kind::Bump || spec.kind == InitSpec::Kind::Sine)
            throw std::invalid_argument("init: finite mode needs positions, not a density");
        if (spec.kind == InitSpec::Kind::Explicit && spec.positions.size() != cfg.sites)
            throw std::invalid_argument("init: position count must match sites");
    }
    if (cfg.mode == RunMode::Density) {
        InitSpec spec = parse_init(cfg.init);
        if (spec.kind == InitSpec::Kind::Explicit)
            throw std::invalid_argument("init: density mode needs a density, not positions");
    }
}

}  // namespace meanfield
