#include "meanfield/acceptance.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <vector>

#include "meanfield/classify.hpp"
#include "meanfield/density.hpp"
#include "meanfield/ensemble.hpp"
#include "meanfield/finite.hpp"
#include "meanfield/histogram.hpp"
#include "meanfield/rng.hpp"

namespace meanfield {

namespace {

constexpr std::uint64_t kSeed = 2026;

std::string fmt(const char* pattern, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), pattern, v);
    return buf;
}

struct Checker {
    std::vector<std::string> failures;
    std::string note;

    void require(bool ok, const std::string& msg) {
        if (!ok) failures.push_back(msg);
    }
};

// 1: one coupled step multiplies the position sum by two on the circle
void conserved_sum(Checker& c) {
    const std::array<std::size_t, 3> sizes{2, 3, 5};
    const std::array<double, 4> couplings{0.1, 0.3, 0.42, 0.7};
    double worst = 0.0;
    std::uint64_t combo = 0;
    for (std::size_t n : sizes)
        for (double eps : couplings) {
            StreamRng rng(kSeed, "acc-conserved", combo++);
            for (int i = 0; i < 10000; ++i) {
                Config x = rng.next_config(n);
                double s0 = reduce(std::accumulate(x.begin(), x.end(), 0.0));
                Config y = step_finite(x, CouplingParams{eps, n});
                double s1 = reduce(std::accumulate(y.begin(), y.end(), 0.0));
                worst = std::max(worst, torus_dist(s1, reduce(2.0 * s0)));
            }
        }
    c.require(worst < 1e-12, "sum identity off by " + fmt("%.3e", worst));
    c.note = "largest sum mismatch " + fmt("%.2e", worst) + " over 120000 states";
}

// 2: the aggregate/difference coordinates evolve autonomously
void factor_commutation(Checker& c) {
    const std::array<double, 4> couplings{0.1, 0.3, 0.42, 0.7};
    double worst2 = 0.0, worst3 = 0.0;
    for (std::size_t j = 0; j < couplings.size(); ++j) {
        double eps = couplings[j];
        StreamRng rng(kSeed, "acc-commute", j);
        for (int i = 0; i < 10000; ++i) {
            Config x2 = rng.next_config(2);
            FactorN2 through = to_factor_n2(step_finite(x2, eps));
            FactorN2 factored = step_factor_n2(to_factor_n2(x2), eps);
            worst2 = std::max({worst2, torus_dist(through.u, factored.u),
                               torus_dist(through.v, factored.v)});

            Config x3 = rng.next_config(3);
            FactorN3 through3 = to_factor_n3(step_finite(x3, eps));
            FactorN3 factored3 = step_factor_n3(to_factor_n3(x3), eps);
            worst3 = std::max({worst3, torus_dist(through3.w, factored3.w),
                               torus_dist(through3.u, factored3.u),
                               torus_dist(through3.v, factored3.v)});
        }
    }
    c.require(worst2 < 1e-9, "pair factor mismatch " + fmt("%.3e", worst2));
    c.require(worst3 < 1e-9, "triple factor mismatch " + fmt("%.3e", worst3));
    c.note = "factor mismatches " + fmt("%.2e", worst2) + " / " + fmt("%.2e", worst3);
}

std::vector<double> difference_series(double eps, std::size_t steps) {
    StreamRng rng(kSeed, "acc-phase", eps < 0.4 ? 0 : 1);
    OrbitOptions opts;
    opts.n_steps = steps;
    opts.burn_in = 1000;
    opts.observables = {Observable::FactorV};
    OrbitRecord rec = simulate_orbit(rng.next_config(2), CouplingParams{eps, 2}, opts);
    return rec.series.at(Observable::FactorV);
}

// 3: partition depth and the phase structure of the difference coordinate
void renormalization_structure(Checker& c) {
    auto v3 = difference_series(1.0 / 3.0, 100000);
    const std::size_t bins = 1024;
    std::vector<bool> even(bins, false), odd(bins, false);
    for (std::size_t i = 0; i < v3.size(); ++i) {
        auto b = std::min(bins - 1, static_cast<std::size_t>(v3[i] * bins));
        (i % 2 == 0 ? even : odd)[b] = true;
    }
    std::size_t overlap = 0;
    for (std::size_t b = 0; b < bins; ++b)
        if (even[b] && odd[b]) ++overlap;
    c.require(overlap == 0, "alternate-step supports at 1/3 overlap in " +
                                std::to_string(overlap) + " bins");

    RenormDepth d3 = renormalization_depth(1.0 / 3.0);
    c.require(d3.n == 1 && d3.K == 2, "depth at 1/3: computed n=" + std::to_string(d3.n) +
                                          " K=" + std::to_string(d3.K) +
                                          ", required n=1 K=2");

    RenormDepth d45 = renormalization_depth(0.45);
    c.require(d45.n == 3 && d45.K == 8,
              "depth at 0.45: computed n=" + std::to_string(d45.n) +
                  " K=" + std::to_string(d45.K) + ", required n=3 K=8");

    int period = largest_disjoint_phase_period(difference_series(0.45, 100000));
    c.require(period == 8, "phase period at 0.45: observed " + std::to_string(period) +
                               ", required 8");
    c.note = "depth(1/3)=(" + std::to_string(d3.n) + "," + std::to_string(d3.K) +
             "), depth(0.45)=(" + std::to_string(d45.n) + "," + std::to_string(d45.K) +
             "), period(0.45)=" + std::to_string(period);
}

// 4: six components mix at weak coupling and freeze past the threshold
void component_labels(Checker& c) {
    StreamRng rng(kSeed, "acc-mixing", 0);
    Config x = rng.next_config(3);
    std::set<int> seen;
    for (int t = 0; t < 100000; ++t) {
        x = step_finite(x, 0.2);
        ComponentLabel lab = classify_component(x);
        if (lab != ComponentLabel::Boundary) seen.insert(static_cast<int>(lab));
    }
    c.require(seen.size() == 6, "weak-coupling orbit visited only " +
                                    std::to_string(seen.size()) + " of 6 components");

    std::set<int> frozen;
    int constant_orbits = 0;
    for (std::uint64_t s = 0; s < 60; ++s) {
        StreamRng orbit_rng(kSeed, "acc-freeze", s);
        Config y = orbit_rng.next_config(3);
        for (int t = 0; t < 1000; ++t) y = step_finite(y, 0.42);
        ComponentLabel lab = classify_component(y);
        bool constant = lab != ComponentLabel::Boundary;
        for (int t = 0; t < 20000 && constant; ++t) {
            y = step_finite(y, 0.42);
            constant = classify_component(y) == lab;
        }
        if (constant) {
            ++constant_orbits;
            frozen.insert(static_cast<int>(lab));
        }
    }
    c.require(constant_orbits == 60, "only " + std::to_string(constant_orbits) +
                                         " of 60 orbits kept a fixed label");
    c.require(frozen.size() == 6, "frozen orbits reached only " +
                                      std::to_string(frozen.size()) + " of 6 components");
    c.note = "mixing saw 6 components; all 60 orbits froze, covering " +
             std::to_string(frozen.size());
}

// 5: the attractor keeps sites separated by a third of the coupling
void minimum_gap(Checker& c) {
    const double eps = 0.45;
    StreamRng rng(kSeed, "acc-gap", 0);
    Config x = rng.next_config(3);
    for (int t = 0; t < 1000; ++t) x = step_finite(x, eps);
    double mg = 1.0;
    for (int t = 0; t < 100000; ++t) {
        x = step_finite(x, eps);
        mg = std::min(mg, min_gap(x));
    }
    c.require(mg >= eps / 3.0 - 1e-3,
              "minimum gap " + fmt("%.6f", mg) + " fell below " + fmt("%.6f", eps / 3.0 - 1e-3));
    c.note = "orbit minimum gap " + fmt("%.6f", mg) + " against bound " +
             fmt("%.6f", eps / 3.0 - 1e-3);
}

// 6: contracting regime limits: synchrony, the rotating splay pair, and the
// exact geometric decay of a dyadic pair difference
void contracting_limits(Checker& c) {
    LimitStateN3 sync = detect_limit_state({0.10, 0.12, 0.14}, 0.7, 40, 1e-6);
    c.require(sync.kind == LimitKind::Sync,
              "near-diagonal triple failed to synchronize within 40 steps");

    LimitStateN3 splay = detect_limit_state({0.01, 0.34, 0.67}, 0.7, 10000, 1e-6);
    c.require(splay.kind == LimitKind::Splay && splay.residual < 1e-6,
              "spread triple failed to reach the equal-arc state");

    Config x{0.5, 0.25};
    double v = to_factor_n2(x).v;
    double worst_ratio = 0.0;
    for (int t = 0; t < 40; ++t) {
        x = step_finite(x, 0.75);
        double vn = to_factor_n2(x).v;
        worst_ratio = std::max(worst_ratio, std::fabs(vn / v - 0.5));
        v = vn;
    }
    c.require(worst_ratio <= 1e-12,
              "pair difference ratio off one half by " + fmt("%.3e", worst_ratio));
    c.note = "sync in " + std::to_string(sync.steps_taken) + " steps, splay in " +
             std::to_string(splay.steps_taken) + ", ratio error " + fmt("%.1e", worst_ratio);
}

// 7: a weakly coupled orbit equidistributes on the circle
void uniform_time_average(Checker& c) {
    StreamRng rng(kSeed, "acc-equidist", 0);
    OrbitOptions opts;
    opts.n_steps = 100000;
    opts.burn_in = 1000;
    opts.record_positions = true;
    OrbitRecord rec = simulate_orbit(rng.next_config(3), CouplingParams{0.3, 3}, opts);
    EmpiricalHistogram hist(1024);
    for (const Config& state : rec.positions) hist.add(state[0]);
    double ks = ks_distance_to_uniform(hist);
    c.require(ks <= 0.02, "site occupation distance to uniform " + fmt("%.4f", ks));
    c.note = "distance to the uniform law " + fmt("%.4f", ks);
}

// 8: the flat density reproduces itself bit for bit
void uniform_fixed_point(Checker& c) {
    for (double eps : {0.2, 0.6}) {
        GridDensity u = GridDensity::uniform(std::size_t{1} << 14);
        TransferStats stats;
        GridDensity g = transfer_step(u, eps, &stats);
        bool exact = stats.mass_defect == 0.0;
        for (double v : g.values) exact = exact && v == 1.0;
        c.require(exact, "flat density not reproduced exactly at coupling " + fmt("%.1f", eps));
    }
    c.note = "flat density reproduced exactly at couplings 0.2 and 0.6";
}

// 9: total variation decays at the modeled geometric rate
void variation_contraction(Checker& c) {
    GridDensity f = GridDensity::sine(std::size_t{1} << 14, 0.025);
    ContractionReport rep = verify_contraction(f, 0.5, 20);
    c.require(rep.per_step_ok, "a step exceeded the per-step variation factor " +
                                   fmt("%.4f", rep.factor + 0.01));
    double bound = std::pow(rep.factor, 20) * rep.initial_tv * 1.05;
    c.require(rep.tv_series.back() <= bound,
              "final variation " + fmt("%.3e", rep.tv_series.back()) + " above " +
                  fmt("%.3e", bound));
    c.note = "factor " + fmt("%.4f", rep.factor) + ", variation " +
             fmt("%.3f", rep.initial_tv) + " -> " + fmt("%.1e", rep.tv_series.back());
}

// 10: a narrow density halves its support and doubles its peak each step,
// and the critical coupling only translates it
void support_halving(Checker& c) {
    const std::size_t m = std::size_t{1} << 14;
    const double cell = 1.0 / static_cast<double>(m);
    GridDensity f = GridDensity::bump(m, 0.5, 0.4);
    for (int k = 0; k < 5; ++k) {
        double len0 = f.support.length;
        double sup0 = density_sup(f);
        double com0 = center_of_mass(f);
        f = transfer_step(f, 0.75);
        c.require(std::fabs(f.support.length - 0.5 * len0) <= 2.0 * cell,
                  "step " + std::to_string(k + 1) + ": support " + fmt("%.6f", f.support.length) +
                      " not half of " + fmt("%.6f", len0));
        double ratio = density_sup(f) / sup0;
        c.require(std::fabs(ratio - 2.0) <= 0.02,
                  "step " + std::to_string(k + 1) + ": peak ratio " + fmt("%.4f", ratio));
        double shift = torus_dist(center_of_mass(f), reduce(2.0 * com0));
        c.require(shift < 1e-3,
                  "step " + std::to_string(k + 1) + ": centroid misses doubling by " +
                      fmt("%.2e", shift));
    }

    GridDensity g0 = GridDensity::bump(m, 0.5, 0.4);
    GridDensity g1 = transfer_step(g0, 0.5);
    c.require(std::fabs(g1.support.length - 0.4) <= 2.0 * cell,
              "critical coupling changed the support length to " +
                  fmt("%.6f", g1.support.length));
    c.require(torus_dist(g1.support.start, 0.8) < 1e-3,
              "critical coupling moved the support start to " + fmt("%.6f", g1.support.start));
    double max_err = 0.0;
    for (std::size_t k = 0; k < m; ++k)
        max_err = std::max(max_err, std::fabs(g1.values[k] - g0.values[(k + m / 2) % m]));
    c.require(max_err < 1e-4, "critical coupling is not a half-turn translation, error " +
                                  fmt("%.2e", max_err));
    c.note = "support 0.4 -> " + fmt("%.5f", f.support.length) +
             " over five steps; translation error " + fmt("%.1e", max_err);
}

// 11: a wide three-lobe density collapses to under half the circle in one
// strongly coupled step, and the threshold coupling is sharp
void wide_support_collapse(Checker& c) {
    const std::size_t m = std::size_t{1} << 14;
    const double cell = 1.0 / static_cast<double>(m);
    GridDensity main = GridDensity::bump(m, 0.55, 0.3);
    GridDensity left = GridDensity::bump(m, 0.3, 0.2);
    GridDensity right = GridDensity::bump(m, 0.8, 0.2);
    std::vector<double> vals(m);
    for (std::size_t k = 0; k < m; ++k)
        vals[k] = 0.9 * main.values[k] + 0.05 * left.values[k] + 0.05 * right.values[k];
    GridDensity f = GridDensity::from_values(std::move(vals), ArcInterval{0.2, 0.7});

    double wings = wing_mass(f);
    c.require(std::fabs(wings - 0.1) < 1e-6, "wing mass " + fmt("%.8f", wings));
    double threshold = collapse_threshold(f);
    c.require(std::fabs(threshold - 0.75) < 1e-6, "threshold " + fmt("%.8f", threshold));

    bool rejected = false;
    try {
        one_step_collapse(f, 0.7);
    } catch (const std::domain_error&) {
        rejected = true;
    }
    c.require(rejected, "sub-threshold coupling 0.7 was not rejected");

    CollapseReport rep = one_step_collapse(f, 0.8);
    c.require(std::fabs(rep.result.support.length - 0.44) <= 2.0 * cell,
              "collapsed support length " + fmt("%.6f", rep.result.support.length));
    c.require(torus_dist(rep.result.support.start, 0.88) <= 2.0 * cell,
              "collapsed support start " + fmt("%.6f", rep.result.support.start));
    c.require(rep.result.support.length < 0.5, "support still covers half the circle");
    c.note = "wings " + fmt("%.6f", wings) + ", threshold " + fmt("%.4f", threshold) +
             ", support 0.7 -> " + fmt("%.5f", rep.result.support.length);
}

// 12: a stratified million-sample pushforward matches the transfer operator
void sampled_pushforward(Checker& c) {
    GridDensity f = GridDensity::bump(std::size_t{1} << 14, 0.5, 0.4);
    GridDensity g = transfer_step(f, 0.75);
    auto mc = monte_carlo_pushforward(f, 0.75, 1000000, kSeed);
    double l1 = l1_binned_distance(g, mc);
    c.require(l1 <= 0.01, "sampled pushforward L1 distance " + fmt("%.5f", l1));
    c.note = "L1 distance " + fmt("%.5f", l1) + " at a million samples";
}

struct Criterion {
    const char* name;
    double budget_seconds;
    void (*fn)(Checker&);
};

const std::array<Criterion, 12> kCriteria{{
    {"conserved-sum", 1.0, conserved_sum},
    {"factor-commutation", 1.0, factor_commutation},
    {"renormalization-structure", 5.0, renormalization_structure},
    {"component-labels", 30.0, component_labels},
    {"minimum-gap", 5.0, minimum_gap},
    {"contracting-limits", 1.0, contracting_limits},
    {"uniform-time-average", 5.0, uniform_time_average},
    {"uniform-fixed-point", 1.0, uniform_fixed_point},
    {"variation-contraction", 10.0, variation_contraction},
    {"support-halving", 10.0, support_halving},
    {"wide-support-collapse", 5.0, wide_support_collapse},
    {"sampled-pushforward", 10.0, sampled_pushforward},
}};

}  // namespace

int criterion_count() { return static_cast<int>(kCriteria.size()); }

CriterionResult run_criterion(int index) {
    if (index < 1 || index > criterion_count())
        throw std::invalid_argument("criterion index must lie in 1.." +
                                    std::to_string(criterion_count()));
    const Criterion& crit = kCriteria[static_cast<std::size_t>(index - 1)];
    CriterionResult res;
    res.index = index;
    res.name = crit.name;
    Checker checker;
    auto t0 = std::chrono::steady_clock::now();
    try {
        crit.fn(checker);
    } catch (const std::exception& e) {
        checker.failures.push_back(std::string("uncaught error: ") + e.what());
    }
    auto t1 = std::chrono::steady_clock::now();
    res.seconds = std::chrono::duration<double>(t1 - t0).count();
    if (res.seconds > crit.budget_seconds)
        checker.failures.push_back("took " + fmt("%.2f", res.seconds) + "s, budget " +
                                   fmt("%.0f", crit.budget_seconds) + "s");
    res.passed = checker.failures.empty();
    if (res.passed) {
        res.detail = checker.note;
    } else {
        std::string joined;
        for (const std::string& f : checker.failures) {
            if (!joined.empty()) joined += "; ";
            joined += f;
        }
        res.detail = joined;
    }
    return res;
}

int run_all_criteria(std::ostream& out) {
    int failures = 0;
    for (int i = 1; i <= criterion_count(); ++i) {
        CriterionResult res = run_criterion(i);
        char head[80];
        std::snprintf(head, sizeof(head), "%s %2d %-26s %6.2fs  ",
                      res.passed ? "PASS" : "FAIL", res.index, res.name.c_str(),
                      res.seconds);
        out << head << res.detail << "\n";
        if (!res.passed) ++failures;
    }
    out << (failures == 0 ? "all criteria passed"
                          : std::to_string(failures) + " criterion(s) failed")
        << "\n";
    return failures;
}

}  // namespace meanfield
