#pragma once

#include <array>
#include <cstddef>
#include <string>

#include "meanfield/circle.hpp"
#include "meanfield/finite.hpp"

namespace meanfield {

// The six strict orderings of the three pairwise counterclockwise arcs,
// plus Boundary for ties.
enum class ComponentLabel { I, II, III, IV, V, VI, Boundary };

const char* to_string(ComponentLabel l);

// The three ccw arcs (d(x,y), d(y,z), d(z,x)) of a three-site configuration.
std::array<double, 3> pairwise_arcs(const Config& cfg);

// Which arc-ordering component a three-site configuration lies in.
// Ties within tie_tol give Boundary.
ComponentLabel classify_component(const Config& cfg, double tie_tol = 1e-12);

// Smallest of the three ccw arcs.
double min_gap(const Config& cfg);

// Length of the shortest arc containing all sites: 1 - max ccw arc for
// three sites, and the analogous quantity for any N.
double config_diameter(const Config& cfg);

enum class LimitKind { Sync, Splay, Undecided };

struct LimitStateN3 {
    LimitKind kind = LimitKind::Undecided;
    double residual = 0.0;  // distance to the detected limit set
    std::size_t steps_taken = 0;
};

// Iterate the coupled map in the contracting regime until the configuration
// is either synchronized (diameter < tol) or evenly spread (all arcs within
// tol of 1/3). eps <= 1/2 is rejected.
LimitStateN3 detect_limit_state(Config cfg, double eps, std::size_t max_steps = 10000,
                                double tol = 1e-6);

// The three invariant circles of the contracting regime: the diagonal and
// two evenly-spread companions that the dynamics swaps with each other.
struct AttractorCircles {
    Config diagonal(double t) const { return {reduce(t), reduce(t), reduce(t)}; }
    Config circle2(double t) const { return {reduce(t), reduce(t + 2.0 / 3.0), reduce(t + 1.0 / 3.0)}; }
    Config circle3(double t) const { return {reduce(t), reduce(t + 1.0 / 3.0), reduce(t + 2.0 / 3.0)}; }

    // distance from a configuration to the union of the three circles
    double distance_to_union(const Config& cfg) const;
};

AttractorCircles contracting_attractor_circles();

}  // namespace meanfield
