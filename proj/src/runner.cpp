#include "meanfield/runner.hpp"

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "meanfield/classify.hpp"
#include "meanfield/density.hpp"
#include "meanfield/ensemble.hpp"
#include "meanfield/finite.hpp"
#include "meanfield/io.hpp"
#include "meanfield/rng.hpp"

namespace meanfield {

namespace {

namespace fs = std::filesystem;

std::string sanitize_cell(std::string s) {
    for (char& c : s)
        if (c == ',' || c == '\n') c = ';';
    return s;
}

std::string finite_csv(const RunConfig& cfg) {
    InitSpec spec = parse_init(cfg.init);
    Config init;
    if (spec.kind == InitSpec::Kind::UniformRandom) {
        StreamRng rng(cfg.seed, "cli-orbit-init", 0);
        init = rng.next_config(cfg.sites);
    } else {
        for (double p : spec.positions) init.push_back(reduce(p));
    }
    OrbitOptions opts;
    opts.n_steps = cfg.steps;
    opts.burn_in = cfg.burn_in;
    opts.record_positions = true;
    for (const std::string& name : cfg.observables)
        opts.observables.push_back(observable_from_name(name));
    OrbitRecord rec = simulate_orbit(init, CouplingParams{cfg.epsilon, cfg.sites}, opts);

    std::ostringstream out;
    out << "step";
    for (std::size_t s = 0; s < cfg.sites; ++s) out << ",x" << s;
    for (Observable obs : opts.observables) out << "," << observable_name(obs);
    out << "\n";
    for (std::size_t t = 0; t < rec.positions.size(); ++t) {
        out << t;
        for (double x : rec.positions[t]) out << "," << format_double(x);
        for (Observable obs : opts.observables)
            out << "," << format_double(rec.series.at(obs)[t]);
        out << "\n";
    }
    return out.str();
}

GridDensity initial_density(const RunConfig& cfg) {
    InitSpec spec = parse_init(cfg.init);
    switch (spec.kind) {
        case InitSpec::Kind::Bump: return GridDensity::bump(cfg.grid_size, spec.a, spec.b);
        case InitSpec::Kind::Sine: return GridDensity::sine(cfg.grid_size, spec.a);
        case InitSpec::Kind::UniformRandom: return GridDensity::uniform(cfg.grid_size);
        case InitSpec::Kind::Explicit: break;
    }
    throw std::invalid_argument("init: density mode needs a density, not positions");
}

void density_csvs(const RunConfig& cfg, std::string& density_out, std::string& series_out) {
    GridDensity f = initial_density(cfg);
    std::ostringstream series;
    series << "step,tv,sup,support_start,support_length\n";
    auto emit_row = [&](std::size_t step) {
        series << step << "," << format_double(total_variation(f)) << ","
               << format_double(density_sup(f)) << ","
               << format_double(f.support.start) << ","
               << format_double(f.support.length) << "\n";
    };
    emit_row(0);
    for (std::size_t k = 1; k <= cfg.steps; ++k) {
        f = transfer_step(f, cfg.epsilon);
        emit_row(k);
    }
    std::ostringstream dens;
    dens << "x,f\n";
    for (std::size_t j = 0; j < f.m; ++j)
        dens << format_double(static_cast<double>(j) / static_cast<double>(f.m)) << ","
             << format_double(f.values[j]) << "\n";
    density_out = dens.str();
    series_out = series.str();
}

ScanRow compute_scan_row(const RunConfig& cfg, double eps) {
    ScanOptions opts;
    opts.n_sites = cfg.sites;
    opts.n_steps = cfg.steps;
    opts.burn_in = cfg.burn_in;
    opts.n_seeds = 20;
    opts.master_seed = cfg.seed;
    return epsilon_scan({eps}, opts).front();
}

std::string scan_csv(const RunConfig& cfg) {
    std::vector<ScanRow> rows(cfg.epsilon_grid.size());
    std::size_t workers = std::min(worker_count(), rows.size());
    if (workers <= 1) {
        for (std::size_t j = 0; j < rows.size(); ++j)
            rows[j] = compute_scan_row(cfg, cfg.epsilon_grid[j]);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t j = next++; j < rows.size(); j = next++)
                    rows[j] = compute_scan_row(cfg, cfg.epsilon_grid[j]);
            });
        for (auto& th : pool) th.join();
    }

    std::ostringstream out;
    out << "epsilon,labels_visited,min_gap_min,min_gap_mean,sync_fraction,"
           "splay_fraction,renorm_n,renorm_K,observed_period,error\n";
    for (const ScanRow& r : rows) {
        out << format_double(r.epsilon) << "," << r.labels_visited << ","
            << format_double(r.min_gap_min) << "," << format_double(r.min_gap_mean) << ","
            << format_double(r.sync_fraction) << "," << format_double(r.splay_fraction)
            << "," << r.renorm_n << "," << r.renorm_K << "," << r.observed_period << ","
            << sanitize_cell(r.error) << "\n";
    }
    return out.str();
}

std::string renorm_csv(const RunConfig& cfg, std::ostream& log) {
    std::vector<double> grid =
        cfg.epsilon_grid.empty() ? std::vector<double>{cfg.epsilon} : cfg.epsilon_grid;
    std::ostringstream out;
    out << "epsilon,n,K,error\n";
    for (double eps : grid) {
        try {
            RenormDepth d = renormalization_depth(eps);
            log << "epsilon=" << format_double(eps) << " n=" << d.n << " K=" << d.K
                << "\n";
            out << format_double(eps) << "," << d.n << "," << d.K << ",\n";
        } catch (const std::exception& e) {
            log << "epsilon=" << format_double(eps) << " error=" << e.what() << "\n";
            out << format_double(eps) << ",-1,0," << sanitize_cell(e.what()) << "\n";
        }
    }
    return out.str();
}

nlohmann::json config_json(const RunConfig& cfg) {
    nlohmann::json j;
    j["mode"] = mode_name(cfg.mode);
    j["epsilon"] = cfg.epsilon;
    j["epsilon_grid"] = cfg.epsilon_grid;
    j["sites"] = cfg.sites;
    j["grid_size"] = cfg.grid_size;
    j["steps"] = cfg.steps;
    j["burn_in"] = cfg.burn_in;
    j["seed"] = cfg.seed;
    j["init"] = cfg.init;
    j["observables"] = cfg.observables;
    j["out_dir"] = cfg.out_dir;
    return j;
}

}  // namespace

std::size_t worker_count() {
    const char* env = std::getenv("MEANFIELD_WORKERS");
    if (!env || !*env) return 1;
    char* end = nullptr;
    unsigned long v = std::strtoul(env, &end, 10);
    if (end == env || *end != '\0' || v < 1 || v > 256)
        throw std::invalid_argument("MEANFIELD_WORKERS must be a count between 1 and 256");
    return static_cast<std::size_t>(v);
}

RunArtifacts execute_run(const RunConfig& cfg, std::ostream& log) {
    validate_config(cfg);
    if (cfg.mode == RunMode::Verify)
        throw std::invalid_argument("verify mode runs the check suite, not a data run");
    std::string started = utc_timestamp_now();

    std::vector<std::pair<std::string, std::string>> outputs;  // name -> content
    switch (cfg.mode) {
        case RunMode::Finite:
            outputs.emplace_back("orbit.csv", finite_csv(cfg));
            break;
        case RunMode::Density: {
            std::string dens, series;
            density_csvs(cfg, dens, series);
            outputs.emplace_back("density.csv", dens);
            outputs.emplace_back("series.csv", series);
            break;
        }
        case RunMode::Scan:
            outputs.emplace_back("scan.csv", scan_csv(cfg));
            break;
        case RunMode::Renorm:
            outputs.emplace_back("renorm.csv", renorm_csv(cfg, log));
            break;
        case RunMode::Verify:
            break;
    }

    RunArtifacts artifacts;
    fs::create_directories(cfg.out_dir);
    nlohmann::json digests = nlohmann::json::array();
    for (const auto& [name, content] : outputs) {
        fs::path path = fs::path(cfg.out_dir) / name;
        atomic_write_file(path.string(), content);
        artifacts.files.push_back(path.string());
        digests.push_back({{"name", name}, {"sha256", sha256_hex(content)}});
        log << "wrote " << path.string() << "\n";
    }

    nlohmann::json manifest;
    manifest["tool_version"] = kToolVersion;
    manifest["mode"] = mode_name(cfg.mode);
    manifest["master_seed"] = cfg.seed;
    manifest["started_utc"] = started;
    manifest["finished_utc"] = utc_timestamp_now();
    manifest["config"] = config_json(cfg);
    manifest["outputs"] = digests;
    fs::path mpath = fs::path(cfg.out_dir) / "manifest.json";
    atomic_write_file(mpath.string(), manifest.dump(2) + "\n");
    artifacts.manifest_path = mpath.string();
    log << "wrote " << mpath.string() << "\n";
    return artifacts;
}

}  // namespace meanfield
