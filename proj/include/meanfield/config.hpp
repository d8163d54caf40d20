#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace meanfield {

inline constexpr const char* kToolVersion = "1.0.0";

enum class RunMode { Finite, Density, Scan, Renorm, Verify };

std::string mode_name(RunMode mode);
RunMode mode_from_name(const std::string& name);

// flat key=value run description; command line flags override file entries
struct RunConfig {
    RunMode mode = RunMode::Finite;
    double epsilon = 0.3;
    std::vector<double> epsilon_grid;  // scan mode
    std::size_t sites = 2;
    std::size_t grid_size = std::size_t{1} << 14;  // density mode
    std::size_t steps = 1000;
    std::size_t burn_in = 0;
    std::uint64_t seed = 1;
    std::string init = "uniform-random";
    std::vector<std::string> observables;
    std::string out_dir = ".";

    bool operator==(const RunConfig&) const = default;
};

// initial state description: "uniform-random", an explicit comma list of
// positions, "bump(center,width)", or "sine(amplitude)"
struct InitSpec {
    enum class Kind { UniformRandom, Explicit, Bump, Sine };
    Kind kind = Kind::UniformRandom;
    std::vector<double> positions;
    double a = 0.0;  // bump center / sine amplitude
    double b = 0.0;  // bump width
};

InitSpec parse_init(const std::string& text);

// comma-separated helpers shared by the config file and the command line
std::vector<double> parse_number_list(const std::string& text);
std::vector<std::string> split_list(const std::string& text);

RunConfig parse_config_text(const std::string& text);
std::string emit_config_text(const RunConfig& cfg);
RunConfig load_config_file(const std::string& path);

// throws std::invalid_argument naming the offending key
void validate_config(const RunConfig& cfg);

}  // namespace meanfield
