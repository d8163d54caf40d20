#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "meanfield/acceptance.hpp"
#include "meanfield/config.hpp"
#include "meanfield/runner.hpp"

int main(int argc, char** argv) {
    using namespace meanfield;
    CLI::App app{std::string("mean-field coupled doubling maps toolkit ") + kToolVersion};

    std::string config_path, mode_str, grid_str, init_str, obs_str, out_dir;
    double epsilon = 0.0;
    std::uint64_t sites = 0, grid_size = 0, steps = 0, burn_in = 0, seed = 0;

    app.add_option("--config", config_path, "key=value run description file");
    app.add_option("--mode", mode_str, "finite | density | scan | renorm | verify");
    app.add_option("--epsilon", epsilon, "coupling strength in [0,1)");
    app.add_option("--epsilon-grid", grid_str, "comma list of couplings (scan, renorm)");
    app.add_option("--sites", sites, "number of coupled sites");
    app.add_option("--grid-size", grid_size, "density grid resolution");
    app.add_option("--steps", steps, "steps to run and record");
    app.add_option("--burn-in", burn_in, "steps discarded before recording");
    app.add_option("--seed", seed, "master seed for every random stream");
    app.add_option("--init", init_str,
                   "uniform-random | x0,x1,... | bump(center,width) | sine(amplitude)");
    app.add_option("--observables", obs_str, "comma list: sum,min_gap,diameter,label,v");
    app.add_option("--out-dir", out_dir, "output directory");
    CLI11_PARSE(app, argc, argv);

    try {
        RunConfig cfg;
        if (!config_path.empty()) cfg = load_config_file(config_path);
        if (app.count("--mode")) cfg.mode = mode_from_name(mode_str);
        if (app.count("--epsilon")) cfg.epsilon = epsilon;
        if (app.count("--epsilon-grid")) cfg.epsilon_grid = parse_number_list(grid_str);
        if (app.count("--sites")) cfg.sites = sites;
        if (app.count("--grid-size")) cfg.grid_size = grid_size;
        if (app.count("--steps")) cfg.steps = steps;
        if (app.count("--burn-in")) cfg.burn_in = burn_in;
        if (app.count("--seed")) cfg.seed = seed;
        if (app.count("--init")) cfg.init = init_str;
        if (app.count("--observables")) cfg.observables = split_list(obs_str);
        if (app.count("--out-dir")) cfg.out_dir = out_dir;

        if (cfg.mode == RunMode::Verify) return run_all_criteria(std::cout);
        validate_config(cfg);
        execute_run(cfg, std::cout);
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
