#include "meanfield/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

#include "meanfield/classify.hpp"
#include "meanfield/rng.hpp"

namespace meanfield {

Observable observable_from_name(const std::string& name) {
    if (name == "sum") return Observable::Sum;
    if (name == "min_gap") return Observable::MinGap;
    if (name == "diameter") return Observable::Diameter;
    if (name == "label") return Observable::Label;
    if (name == "v") return Observable::FactorV;
    throw std::invalid_argument("unknown observable: " + name);
}

std::string observable_name(Observable obs) {
    switch (obs) {
        case Observable::Sum: return "sum";
        case Observable::MinGap: return "min_gap";
        case Observable::Diameter: return "diameter";
        case Observable::Label: return "label";
        case Observable::FactorV: return "v";
    }
    throw std::logic_error("unreachable");
}

namespace {

double evaluate_observable(Observable obs, const Config& x) {
    switch (obs) {
        case Observable::Sum: {
            double s = std::accumulate(x.begin(), x.end(), 0.0);
            return reduce(s);
        }
        case Observable::MinGap: return min_gap(x);
        case Observable::Diameter: return config_diameter(x);
        case Observable::Label:
            return static_cast<double>(static_cast<int>(classify_component(x)));
        case Observable::FactorV: return to_factor_n2(x).v;
    }
    throw std::logic_error("unreachable");
}

void require_sites(Observable obs, std::size_t need, std::size_t have) {
    if (have != need)
        throw std::invalid_argument("observable " + observable_name(obs) + " requires " +
                                    std::to_string(need) + " sites");
}

}  // namespace

OrbitRecord simulate_orbit(const Config& init, const CouplingParams& params,
                           const OrbitOptions& opts) {
    params.validate();
    if (init.size() != params.n_sites)
        throw std::invalid_argument("simulate_orbit: init size does not match n_sites");
    for (Observable obs : opts.observables) {
        if (obs == Observable::MinGap || obs == Observable::Label)
            require_sites(obs, 3, params.n_sites);
        if (obs == Observable::FactorV) require_sites(obs, 2, params.n_sites);
    }
    if (opts.record_positions && !opts.allow_large_memory &&
        opts.n_steps * params.n_sites > 10'000'000)
        throw std::invalid_argument(
            "simulate_orbit: position record exceeds 1e7 values, "
            "set allow_large_memory to confirm");

    OrbitRecord rec;
    rec.epsilon = params.epsilon;
    rec.n_sites = params.n_sites;
    if (opts.record_positions) rec.positions.reserve(opts.n_steps);
    for (Observable obs : opts.observables) rec.series[obs].reserve(opts.n_steps);

    Config x = init;
    std::size_t global_step = 0;
    auto advance = [&](Config& state) {
        bool check = opts.conservation_check_every > 0 &&
                     global_step % opts.conservation_check_every == 0;
        double s0 = check ? reduce(std::accumulate(state.begin(), state.end(), 0.0)) : 0.0;
        state = step_finite(state, params);
        if (check) {
            double s1 = reduce(std::accumulate(state.begin(), state.end(), 0.0));
            if (torus_dist(s1, reduce(2.0 * s0)) > 1e-9)
                throw std::runtime_error("simulate_orbit: conserved sum drifted");
        }
        ++global_step;
    };

    for (std::size_t t = 0; t < opts.burn_in; ++t) advance(x);
    for (std::size_t t = 0; t < opts.n_steps; ++t) {
        advance(x);
        if (opts.record_positions) rec.positions.push_back(x);
        for (Observable obs : opts.observables)
            rec.series[obs].push_back(evaluate_observable(obs, x));
    }
    rec.final_state = x;
    return rec;
}

double time_average(const OrbitRecord& rec, Observable obs) {
    auto it = rec.series.find(obs);
    if (it == rec.series.end() || it->second.empty())
        throw std::invalid_argument("time_average: observable was not recorded");
    const auto& v = it->second;
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

int largest_disjoint_phase_period(const std::vector<double>& series, int max_period,
                                  std::size_t bins) {
    if (series.empty()) throw std::invalid_argument("empty series");
    if (max_period < 1 || max_period > 16)
        throw std::invalid_argument("max_period must lie in 1..16");
    for (int period = max_period; period >= 2; --period) {
        std::vector<std::uint16_t> phase_mask(bins, 0);
        bool disjoint = true;
        for (std::size_t i = 0; i < series.size() && disjoint; ++i) {
            double u = series[i];
            if (!(u >= 0.0 && u < 1.0)) u = reduce(u);
            auto b = std::min(bins - 1, static_cast<std::size_t>(u * static_cast<double>(bins)));
            std::uint16_t bit = static_cast<std::uint16_t>(1u << (i % period));
            if (phase_mask[b] & static_cast<std::uint16_t>(~bit)) disjoint = false;
            phase_mask[b] = static_cast<std::uint16_t>(phase_mask[b] | bit);
        }
        if (disjoint) return period;
    }
    return 1;
}

std::vector<ScanRow> epsilon_scan(const std::vector<double>& eps_grid,
                                  const ScanOptions& opts) {
    std::vector<ScanRow> rows;
    rows.reserve(eps_grid.size());
    for (std::size_t j = 0; j < eps_grid.size(); ++j) {
        ScanRow row;
        row.epsilon = eps_grid[j];
        try {
            CouplingParams params{eps_grid[j], opts.n_sites};
            params.validate();
            if (params.expanding()) {
                auto depth = renormalization_depth(params.epsilon);
                row.renorm_n = depth.n;
                row.renorm_K = depth.K;
            }
            if (params.contracting()) {
                std::size_t sync = 0, splay = 0;
                for (std::size_t s = 0; s < opts.n_seeds; ++s) {
                    StreamRng rng(opts.master_seed, "scan-limit", j * 100000 + s);
                    Config init = rng.next_config(opts.n_sites);
                    if (opts.n_sites == 3) {
                        LimitStateN3 state = detect_limit_state(init, params.epsilon);
                        if (state.kind == LimitKind::Sync) ++sync;
                        if (state.kind == LimitKind::Splay) ++splay;
                    } else {
                        OrbitOptions run;
                        run.n_steps = opts.n_steps;
                        Config fin = simulate_orbit(init, params, run).final_state;
                        if (config_diameter(fin) < 1e-6) ++sync;
                    }
                }
                row.sync_fraction = static_cast<double>(sync) / static_cast<double>(opts.n_seeds);
                row.splay_fraction =
                    static_cast<double>(splay) / static_cast<double>(opts.n_seeds);
            } else {
                StreamRng rng(opts.master_seed, "scan-orbit", j);
                Config init = rng.next_config(opts.n_sites);
                OrbitOptions run;
                run.n_steps = opts.n_steps;
                run.burn_in = opts.burn_in;
                if (opts.n_sites == 2) run.observables = {Observable::FactorV};
                if (opts.n_sites == 3)
                    run.observables = {Observable::Label, Observable::MinGap};
                OrbitRecord rec = simulate_orbit(init, params, run);
                if (opts.n_sites == 2)
                    row.observed_period =
                        largest_disjoint_phase_period(rec.series.at(Observable::FactorV));
                if (opts.n_sites == 3) {
                    std::set<int> labels;
                    for (double v : rec.series.at(Observable::Label)) {
                        int lab = static_cast<int>(v);
                        if (lab != static_cast<int>(ComponentLabel::Boundary))
                            labels.insert(lab);
                    }
                    row.labels_visited = static_cast<int>(labels.size());
                    const auto& gaps = rec.series.at(Observable::MinGap);
                    row.min_gap_min = *std::min_element(gaps.begin(), gaps.end());
                    row.min_gap_mean = std::accumulate(gaps.begin(), gaps.end(), 0.0) /
                                       static_cast<double>(gaps.size());
                }
            }
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        rows.push_back(row);
    }
    return rows;
}

}  // namespace meanfield
