#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "meanfield/density.hpp"
#include "meanfield/rng.hpp"

using namespace meanfield;

namespace {
const std::size_t kM = 1 << 14;

GridDensity wide_three_lobe() {
    // lobes at [0.4,0.7], [0.2,0.4], [0.7,0.9] with weights 0.9 / 0.05 / 0.05
    GridDensity main = GridDensity::bump(kM, 0.55, 0.3);
    GridDensity left = GridDensity::bump(kM, 0.3, 0.2);
    GridDensity right = GridDensity::bump(kM, 0.8, 0.2);
    std::vector<double> vals(kM);
    for (std::size_t k = 0; k < kM; ++k)
        vals[k] = 0.9 * main.values[k] + 0.05 * left.values[k] + 0.05 * right.values[k];
    return GridDensity::from_values(std::move(vals), ArcInterval{0.2, 0.7});
}
}  // namespace

TEST_CASE("density constructors") {
    GridDensity u = GridDensity::uniform(kM);
    CHECK(u.integral() == 1.0);
    CHECK(total_variation(u) == 0.0);
    CHECK(u.support.length == 1.0);

    GridDensity s = GridDensity::sine(kM, 0.025);
    CHECK(s.integral() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(total_variation(s) == doctest::Approx(0.1).epsilon(1e-6));
    CHECK(density_sup(s) == doctest::Approx(1.025).epsilon(1e-6));

    GridDensity b = GridDensity::bump(kM, 0.5, 0.4);
    CHECK(b.integral() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(b.support.start == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(b.support.length == 0.4);
    CHECK(density_sup(b) == doctest::Approx(5.0).epsilon(0.01));
    CHECK(b.value_at(0.1) == 0.0);
    CHECK(center_of_mass(b) == doctest::Approx(0.5).epsilon(1e-4));

    CHECK_THROWS_AS(GridDensity::sine(kM, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(GridDensity::bump(kM, 0.5, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(GridDensity::from_values(std::vector<double>(kM, -1.0), {0.0, 1.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(center_of_mass(wide_three_lobe()), std::domain_error);
}

TEST_CASE("uniform density induces exact doubling") {
    GridDensity u = GridDensity::uniform(kM);
    for (double eps : {0.2, 0.6}) {
        DensityMapEval eval(u, eps);
        CHECK(eval.first_moment() == 0.5);
        StreamRng rng(5, "map-eval", 0);
        for (int i = 0; i < 1000; ++i) {
            double x = rng.next_unit();
            CHECK(eval.forward(x) == doctest::Approx(2.0 * x).epsilon(1e-12));
            CHECK(eval.derivative(x) == 2.0);
        }
    }
}

TEST_CASE("induced map lifts with degree two and inverts cleanly") {
    GridDensity s = GridDensity::sine(kM, 0.2);
    DensityMapEval eval(s, 0.3);
    StreamRng rng(5, "map-lift", 0);
    for (int i = 0; i < 300; ++i) {
        double x = 4.0 * rng.next_unit() - 2.0;
        CHECK(eval.lift(x + 1.0) - eval.lift(x) == doctest::Approx(2.0).epsilon(1e-12));
    }
    CHECK(eval.forward(1.0) - eval.forward(0.0) == doctest::Approx(2.0).epsilon(1e-12));

    // strict monotonicity of the lift
    double prev = eval.lift(0.0);
    for (int i = 1; i <= 2000; ++i) {
        double cur = eval.lift(i / 2000.0);
        CHECK(cur > prev);
        prev = cur;
    }

    for (int i = 0; i < 200; ++i) {
        double t = rng.next_unit();
        auto ys = eval.preimages(t);
        CHECK(ys[0] != ys[1]);
        for (double y : ys) {
            CHECK(y >= 0.0);
            CHECK(y <= 1.0);
            CHECK(torus_dist(reduce(eval.forward(y)), t) < 1e-12);
        }
    }

    // derivative agrees with a centered difference away from the kink
    for (int i = 0; i < 200; ++i) {
        double y = rng.next_unit();
        if (std::fabs(y - 0.5) < 1e-3 || y < 1e-3 || y > 1.0 - 1e-3) continue;
        double d = 1e-6;
        double fd = (eval.forward(y + d) - eval.forward(y - d)) / (2.0 * d);
        CHECK(eval.derivative(y) == doctest::Approx(fd).epsilon(1e-4));
    }
}

TEST_CASE("uniform density is a bitwise fixed point of the transfer operator") {
    for (double eps : {0.2, 0.6}) {
        GridDensity u = GridDensity::uniform(kM);
        TransferStats stats;
        GridDensity g = transfer_step(u, eps, &stats);
        CHECK(stats.mass_defect == 0.0);
        bool all_one = std::all_of(g.values.begin(), g.values.end(),
                                   [](double v) { return v == 1.0; });
        CHECK(all_one);
    }
}

TEST_CASE("transfer keeps unit mass and reports a small defect") {
    GridDensity b = GridDensity::bump(kM, 0.5, 0.4);
    TransferStats stats;
    GridDensity g = transfer_step(b, 0.75, &stats);
    CHECK(stats.mass_defect < 1e-5);
    CHECK(g.integral() == doctest::Approx(1.0).epsilon(1e-12));
    g.validate();
}

TEST_CASE("total variation contracts under weak coupling") {
    GridDensity s = GridDensity::sine(kM, 0.025);
    ContractionReport rep = verify_contraction(s, 0.5, 20);
    CHECK(rep.initial_tv == doctest::Approx(0.1).epsilon(1e-6));
    CHECK(rep.factor == doctest::Approx(1.5 / (2.0 * 0.95 * 0.95)).epsilon(1e-6));
    CHECK(rep.per_step_ok);
    REQUIRE(rep.tv_series.size() == 21);
    CHECK(rep.tv_series[1] < rep.tv_series[0]);
    CHECK(rep.tv_series.back() <=
          std::pow(rep.factor, 20) * rep.initial_tv * 1.05);

    // coupling beyond the admissible window is refused
    GridDensity rough = GridDensity::sine(kM, 0.5);  // variation 2
    CHECK_THROWS_AS(verify_contraction(rough, 0.2, 1), std::domain_error);
}

TEST_CASE("narrow support halves and the peak doubles step by step") {
    const double eps = 0.75;
    const double h = 1.0 / kM;
    GridDensity f = GridDensity::bump(kM, 0.5, 0.4);
    for (int k = 0; k < 5; ++k) {
        double len_before = f.support.length;
        double sup_before = density_sup(f);
        double com_before = center_of_mass(f);
        f = transfer_step(f, eps);
        CHECK(std::fabs(f.support.length - 0.5 * len_before) <= 2.0 * h);
        CHECK(density_sup(f) == doctest::Approx(2.0 * sup_before).epsilon(0.01));
        CHECK(torus_dist(center_of_mass(f), reduce(2.0 * com_before)) < 1e-3);
    }
}

TEST_CASE("critical coupling translates a narrow density by half a turn") {
    GridDensity f = GridDensity::bump(kM, 0.5, 0.4);
    GridDensity g = transfer_step(f, 0.5);
    CHECK(std::fabs(g.support.length - 0.4) <= 2.0 / kM);
    CHECK(torus_dist(g.support.start, 0.8) < 1e-6);
    double max_err = 0.0;
    for (std::size_t k = 0; k < kM; ++k) {
        double shifted = f.values[(k + kM / 2) % kM];
        max_err = std::max(max_err, std::fabs(g.values[k] - shifted));
    }
    CHECK(max_err < 1e-4);
}

TEST_CASE("wide support collapses in one strongly coupled step") {
    GridDensity f = wide_three_lobe();
    CHECK(wing_mass(f) == doctest::Approx(0.1).epsilon(1e-6));
    CHECK(collapse_threshold(f) == doctest::Approx(0.75).epsilon(1e-6));

    CollapseReport rep = one_step_collapse(f, 0.8);
    CHECK(rep.predicted_length == doctest::Approx(0.44).epsilon(1e-6));
    CHECK(std::fabs(rep.result.support.length - 0.44) <= 2.0 / kM);
    CHECK(torus_dist(rep.result.support.start, 0.88) < 1e-3);
    CHECK(rep.result.support.length < 0.5);

    CHECK_THROWS_AS(one_step_collapse(f, 0.7), std::domain_error);
    CHECK_THROWS_AS(wing_mass(GridDensity::bump(kM, 0.5, 0.4)), std::domain_error);
}

TEST_CASE("sampled pushforward matches the transfer operator") {
    GridDensity f = GridDensity::bump(kM, 0.5, 0.4);
    GridDensity g = transfer_step(f, 0.75);
    auto mc = monte_carlo_pushforward(f, 0.75, 100000, 99);
    auto mc2 = monte_carlo_pushforward(f, 0.75, 100000, 99);
    CHECK(mc == mc2);
    CHECK(l1_binned_distance(g, mc) <= 0.02);

    CHECK_THROWS_AS(monte_carlo_pushforward(f, 0.75, 100, 99), std::invalid_argument);
    CHECK_THROWS_AS(l1_binned_distance(g, std::vector<double>(1000, 1.0)),
                    std::invalid_argument);
    CHECK(l1_binned_distance(GridDensity::uniform(kM), std::vector<double>(1024, 1.0)) ==
          0.0);
}
