#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "meanfield/circle.hpp"
#include "meanfield/finite.hpp"

namespace meanfield {

// per-step scalar observables recordable along an orbit
enum class Observable { Sum, MinGap, Diameter, Label, FactorV };

Observable observable_from_name(const std::string& name);
std::string observable_name(Observable obs);

struct OrbitOptions {
    std::size_t n_steps = 0;
    std::size_t burn_in = 0;
    bool record_positions = false;
    bool allow_large_memory = false;  // required when positions exceed 1e7 doubles
    std::vector<Observable> observables;
    std::size_t conservation_check_every = 1000;  // 0 disables the drift guard
};

struct OrbitRecord {
    double epsilon = 0.0;
    std::size_t n_sites = 0;
    std::vector<Config> positions;  // post-step states, only if requested
    std::map<Observable, std::vector<double>> series;
    Config final_state;
};

// iterate the coupled map, recording after each post-burn-in step.
// every conservation_check_every steps the single-step sum identity
// sum' = 2 sum (mod 1) is re-verified to 1e-9 and a violation throws.
OrbitRecord simulate_orbit(const Config& init, const CouplingParams& params,
                           const OrbitOptions& opts);

double time_average(const OrbitRecord& rec, Observable obs);

// largest P in 1..max_period whose phase classes i mod P occupy pairwise
// disjoint sets of histogram bins. P = 1 is vacuously disjoint.
int largest_disjoint_phase_period(const std::vector<double>& series,
                                  int max_period = 16, std::size_t bins = 1024);

struct ScanOptions {
    std::size_t n_sites = 2;
    std::size_t n_steps = 20000;
    std::size_t burn_in = 1000;
    std::size_t n_seeds = 10;  // contracting regime: limit-state sample size
    std::uint64_t master_seed = 1;
};

struct ScanRow {
    double epsilon = 0.0;
    int labels_visited = 0;      // distinct interior labels seen (3 sites only)
    double min_gap_min = 0.0;    // over the recorded orbit (3 sites only)
    double min_gap_mean = 0.0;
    double sync_fraction = 0.0;  // contracting regime, over n_seeds trials
    double splay_fraction = 0.0;
    int renorm_n = -1;           // expanding regime only
    int renorm_K = 0;
    int observed_period = 0;     // disjoint-phase period of the v series (2 sites)
    std::string error;           // nonempty marks a row that could not be computed
};

std::vector<ScanRow> epsilon_scan(const std::vector<double>& eps_grid,
                                  const ScanOptions& opts);

}  // namespace meanfield
