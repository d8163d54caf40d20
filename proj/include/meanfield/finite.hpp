#pragma once

#include <stdexcept>

#include "meanfield/circle.hpp"

namespace meanfield {

struct CouplingParams {
    double epsilon = 0.0;
    std::size_t n_sites = 2;

    bool expanding() const { return epsilon < 0.5; }
    bool contracting() const { return epsilon > 0.5; }
    void validate() const;
};

// One step of the mean-field coupled doubling map:
//   x_s' = 2 (x_s + eps/N * sum_r g(x_r - x_s)) mod 1.
// The coordinate sum doubles mod 1 because g is odd.
Config step_finite(const Config& x, const CouplingParams& p);
Config step_finite(const Config& x, double eps);

// Factor coordinates for two sites: u = x+y, v = x-y (mod 1).
struct FactorN2 {
    double u = 0.0, v = 0.0;
};
FactorN2 to_factor_n2(const Config& cfg);
FactorN2 step_factor_n2(const FactorN2& fc, double eps);

// The interval map driving the v coordinate. Piecewise affine with slope
// 2(1-eps) and one discontinuity; the value at v = 1/2 follows the right
// branch limit, H(1/2) = eps.
double map_H(double v, double eps);

// Rescaling of map_H from [eps, 1-eps] to the unit interval: a centrally
// symmetric Lorenz map. Defined for eps < 1/2 only.
double map_L(double w, double eps);

// Slope 2(1-eps) falls on a Markov partition point; the component count is
// not defined by the strict renormalization inequalities there.
struct markov_boundary_error : std::domain_error {
    explicit markov_boundary_error(double eps);
};

// How many times the Lorenz map renormalizes, and the resulting count of
// cyclically permuted mixing components K = 2^n.
struct RenormDepth {
    int n = 0;
    int K = 1;
};
RenormDepth renormalization_depth(double eps);

// Factor coordinates for three sites: w = x+y+z, u = x-y, v = y-z (mod 1).
struct FactorN3 {
    double w = 0.0, u = 0.0, v = 0.0;
};
FactorN3 to_factor_n3(const Config& cfg);

// Second-iterate difference dynamics in closed form, valid everywhere off
// the singularity lines:
//   u' = 2u + (2e/3)(g(v) - g(u+v) - 2g(u)),
//   v' = 2v + (2e/3)(g(u) - g(u+v) - 2g(v)),  w' = 2w.
FactorN3 step_factor_n3(const FactorN3& fc, double eps);

// Restriction of the difference dynamics to the diagonal u = v.
double diagonal_map_n3(double u, double eps);

}  // namespace meanfield
