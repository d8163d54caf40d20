#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "meanfield/circle.hpp"

namespace meanfield {

// probability density sampled at m equispaced nodes j/m on the circle,
// unit mass under the cyclic trapezoid rule (== mean of the values),
// with an arc tracking where the density is supported
struct GridDensity {
    std::size_t m = 0;
    std::vector<double> values;
    ArcInterval support{0.0, 1.0};

    static GridDensity uniform(std::size_t m);
    static GridDensity sine(std::size_t m, double amplitude);
    static GridDensity bump(std::size_t m, double center, double width);
    // arbitrary nonnegative samples, renormalized to unit mass
    static GridDensity from_values(std::vector<double> values, ArcInterval support);

    double integral() const;       // cyclic trapezoid mass
    double value_at(double x) const;  // periodic linear interpolation
    void validate() const;
};

double total_variation(const GridDensity& f);
double density_sup(const GridDensity& f);
// mass centroid in the chart anchored at the support's start; the support
// may not exceed half the circle or the chart is ambiguous
double center_of_mass(const GridDensity& f);

// the self-consistent circle map induced by a density: doubling plus the
// mean-field displacement field of f. strictly increasing, lift degree 2.
class DensityMapEval {
  public:
    DensityMapEval(const GridDensity& f, double epsilon);

    double forward(double x) const;           // x in [0, 1]
    double lift(double x) const;              // any real, lift(x+1) = lift(x)+2
    double derivative(double y) const;        // 2(1 + eps(f(y +- 1/2) - 1))
    std::array<double, 2> preimages(double t) const;  // both solutions of F(y) = t mod 1
    double first_moment() const { return m1_; }
    double epsilon() const { return eps_; }

  private:
    double cumulative(double t) const;  // int_0^t of the interpolant
    std::size_t m_;
    double eps_;
    double m1_;
    std::vector<double> values_;
    std::vector<double> prefix_;  // node cumulative integrals, size m+1
};

struct TransferStats {
    double mass_defect = 0.0;  // |raw mass - 1| before renormalization
    double clamp_spill = 0.0;  // largest value zeroed in the one-cell overhang band
};

// push the density through its own induced map (transfer operator),
// renormalize mass, and restrict to the analytically propagated support
GridDensity transfer_step(const GridDensity& f, double epsilon,
                          TransferStats* stats = nullptr);

struct ContractionReport {
    double factor = 0.0;      // modeled per-step contraction of total variation
    double initial_tv = 0.0;
    std::vector<double> tv_series;  // n_steps + 1 entries, starting at initial_tv
    bool per_step_ok = true;  // every step obeyed the factor bound
};

// iterate the transfer operator and check the per-step variation bound
// tv' <= (factor + factor_margin) * tv + absolute_floor
// the floor absorbs grid rounding noise once the variation has all but
// vanished; at the default it sits far below any variation worth checking
ContractionReport verify_contraction(GridDensity f, double epsilon, std::size_t n_steps,
                                     double factor_margin = 0.01,
                                     double absolute_floor = 1e-12);

// mass sitting in the two wings of a wide support (chart at the support
// start): the part below length - 1/2 plus the part at or beyond 1/2
double wing_mass(const GridDensity& f);
// minimal coupling that contracts a wide support to under half in one step
double collapse_threshold(const GridDensity& f);

struct CollapseReport {
    double wing_mass = 0.0;
    double threshold = 0.0;
    double predicted_length = 0.0;  // 2(1-eps)len + 2 eps wing_mass
    GridDensity result;
};

CollapseReport one_step_collapse(const GridDensity& f, double epsilon);

// stratified inverse-transform sample of f pushed through its induced map,
// returned as per-bin density values with mean one
std::vector<double> monte_carlo_pushforward(const GridDensity& f, double epsilon,
                                            std::size_t n_samples,
                                            std::uint64_t master_seed,
                                            std::size_t n_bins = 1024);

// L1 distance between a grid density (averaged per bin) and a binned density
double l1_binned_distance(const GridDensity& f, const std::vector<double>& bin_density);

}  // namespace meanfield
