#include "meanfield/density.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "meanfield/rng.hpp"

namespace meanfield {

namespace {

constexpr double kMassTol = 1e-9;     // standing mass invariant
constexpr double kSpillTol = 1e-12;   // tolerated density beyond the support overhang

// raw transfer mass defect treated as a bug: quadrature error scales with the
// square of the cell width, so the guard follows it (1e-4 at m = 2^14), with a
// hard 10% cap so a genuine transport bug aborts even on toy grids
double defect_guard(std::size_t m) {
    double h = 1.0 / static_cast<double>(m);
    return std::min(0.1, std::max(1e-4, 2.7e4 * h * h));
}

double mean_of(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

GridDensity GridDensity::uniform(std::size_t m) {
    if (m < 16) throw std::invalid_argument("grid too coarse");
    GridDensity f;
    f.m = m;
    f.values.assign(m, 1.0);
    f.support = {0.0, 1.0};
    return f;
}

GridDensity GridDensity::sine(std::size_t m, double amplitude) {
    if (m < 16) throw std::invalid_argument("grid too coarse");
    if (!(std::fabs(amplitude) < 1.0))
        throw std::invalid_argument("sine amplitude must stay below 1");
    GridDensity f;
    f.m = m;
    f.values.resize(m);
    for (std::size_t k = 0; k < m; ++k)
        f.values[k] =
            1.0 + amplitude * std::sin(2.0 * std::numbers::pi * static_cast<double>(k) / m);
    double mass = f.integral();
    for (double& v : f.values) v /= mass;
    f.support = {0.0, 1.0};
    return f;
}

GridDensity GridDensity::bump(std::size_t m, double center, double width) {
    if (m < 16) throw std::invalid_argument("grid too coarse");
    if (!(width > 0.0 && width <= 1.0))
        throw std::invalid_argument("bump width must lie in (0, 1]");
    GridDensity f;
    f.m = m;
    f.values.assign(m, 0.0);
    double start = reduce(center - 0.5 * width);
    for (std::size_t k = 0; k < m; ++k) {
        double t = reduce(static_cast<double>(k) / m - start);
        if (t < width) {
            double c = std::cos(std::numbers::pi * (t - 0.5 * width) / width);
            f.values[k] = 2.0 / width * c * c;
        }
    }
    double mass = f.integral();
    for (double& v : f.values) v /= mass;
    f.support = {start, width};
    return f;
}

GridDensity GridDensity::from_values(std::vector<double> values, ArcInterval support) {
    if (values.size() < 16) throw std::invalid_argument("grid too coarse");
    for (double v : values)
        if (!(v >= 0.0)) throw std::invalid_argument("density values must be nonnegative");
    GridDensity f;
    f.m = values.size();
    f.values = std::move(values);
    double mass = f.integral();
    if (!(mass > 0.0)) throw std::invalid_argument("density carries no mass");
    for (double& v : f.values) v /= mass;
    f.support = support;
    return f;
}

double GridDensity::integral() const { return mean_of(values); }

double GridDensity::value_at(double x) const {
    double t = reduce(x) * static_cast<double>(m);
    auto k = std::min(static_cast<std::size_t>(t), m - 1);
    double th = t - static_cast<double>(k);
    double f0 = values[k];
    double f1 = values[(k + 1) % m];
    return f0 + th * (f1 - f0);
}

void GridDensity::validate() const {
    if (m < 16 || values.size() != m) throw std::logic_error("inconsistent density grid");
    if (std::fabs(integral() - 1.0) > kMassTol)
        throw std::logic_error("density mass drifted off 1");
}

double total_variation(const GridDensity& f) {
    double tv = 0.0;
    for (std::size_t k = 0; k < f.m; ++k)
        tv += std::fabs(f.values[(k + 1) % f.m] - f.values[k]);
    return tv;
}

double density_sup(const GridDensity& f) {
    return *std::max_element(f.values.begin(), f.values.end());
}

double center_of_mass(const GridDensity& f) {
    f.validate();
    if (f.support.length > 0.5 + 1e-12)
        throw std::domain_error("center_of_mass: support too wide for a single chart");
    const double h = 1.0 / static_cast<double>(f.m);
    double first = 0.0, mass = 0.0;
    for (std::size_t k = 0; k < f.m; ++k) {
        double t = reduce(static_cast<double>(k) * h - f.support.start);
        if (t > f.support.length + h) continue;
        t = std::min(t, f.support.length);
        first += t * f.values[k] * h;
        mass += f.values[k] * h;
    }
    if (!(mass > 0.0)) throw std::domain_error("center_of_mass: no mass inside the support");
    return reduce(f.support.start + first / mass);
}

DensityMapEval::DensityMapEval(const GridDensity& f, double epsilon)
    : m_(f.m), eps_(epsilon), values_(f.values) {
    f.validate();
    if (!(epsilon >= 0.0 && epsilon < 1.0))
        throw std::domain_error("coupling must lie in [0, 1)");
    const double h = 1.0 / static_cast<double>(m_);
    prefix_.assign(m_ + 1, 0.0);
    for (std::size_t k = 0; k < m_; ++k)
        prefix_[k + 1] = prefix_[k] + 0.5 * h * (values_[k] + values_[(k + 1) % m_]);
    // first moment by the plain trapezoid rule, the closing node taking f(0)
    double acc = 0.5 * 1.0 * values_[0];
    for (std::size_t k = 1; k < m_; ++k) acc += static_cast<double>(k) * h * values_[k];
    m1_ = acc * h;
}

double DensityMapEval::cumulative(double t) const {
    if (t >= 1.0) return prefix_[m_];
    if (t <= 0.0) return 0.0;
    double tt = t * static_cast<double>(m_);
    auto k = std::min(static_cast<std::size_t>(tt), m_ - 1);
    double th = tt - static_cast<double>(k);
    double f0 = values_[k];
    double f1 = values_[(k + 1) % m_];
    return prefix_[k] + (1.0 / static_cast<double>(m_)) * (th * f0 + 0.5 * th * th * (f1 - f0));
}

double DensityMapEval::forward(double x) const {
    if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("forward: x must lie in [0, 1]");
    double drift;
    if (x <= 0.5)
        drift = m1_ - (prefix_[m_] - cumulative(x + 0.5));
    else
        drift = m1_ + cumulative(x - 0.5);
    return 2.0 * (1.0 - eps_) * x + 2.0 * eps_ * drift;
}

double DensityMapEval::lift(double x) const {
    double n = std::floor(x);
    return 2.0 * n + forward(x - n);
}

double DensityMapEval::derivative(double y) const {
    // f is periodic, so the half-shift sign never matters
    double t = reduce(y + 0.5) * static_cast<double>(m_);
    auto k = std::min(static_cast<std::size_t>(t), m_ - 1);
    double th = t - static_cast<double>(k);
    double interp = values_[k] + th * (values_[(k + 1) % m_] - values_[k]);
    return 2.0 * (1.0 + eps_ * (interp - 1.0));
}

std::array<double, 2> DensityMapEval::preimages(double t) const {
    double c0 = lift(0.0);
    double base = t + std::ceil(c0 - t);
    std::array<double, 2> out{};
    for (int j = 0; j < 2; ++j) {
        double target = base + static_cast<double>(j);
        double lo = 0.0, hi = 1.0;
        for (int it = 0; it < 50; ++it) {
            double mid = 0.5 * (lo + hi);
            if (lift(mid) < target)
                lo = mid;
            else
                hi = mid;
        }
        out[j] = 0.5 * (lo + hi);
    }
    return out;
}

GridDensity transfer_step(const GridDensity& f, double epsilon, TransferStats* stats) {
    f.validate();
    DensityMapEval eval(f, epsilon);
    const std::size_t m = f.m;
    const double h = 1.0 / static_cast<double>(m);
    std::vector<double> out(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        auto ys = eval.preimages(static_cast<double>(i) * h);
        double acc = 0.0;
        for (double y : ys) acc += f.value_at(y) / eval.derivative(y);
        out[i] = acc;
    }
    double defect = std::fabs(mean_of(out) - 1.0);
    if (stats) {
        stats->mass_defect = defect;
        stats->clamp_spill = 0.0;
    }
    if (defect > defect_guard(m))
        throw std::runtime_error("transfer_step: mass defect exceeded the sanity guard");

    GridDensity g;
    g.m = m;
    g.values = std::move(out);
    g.support = {0.0, 1.0};
    if (f.support.length < 1.0) {
        double b1 = f.support.start;
        double len2 = eval.lift(b1 + f.support.length) - eval.lift(b1);
        if (len2 >= 1.0) {
            g.support = {0.0, 1.0};
        } else {
            g.support = {reduce(eval.lift(b1)), len2};
            double spill = 0.0, escaped = 0.0;
            for (std::size_t k = 0; k < m; ++k) {
                double d = reduce(static_cast<double>(k) * h - g.support.start);
                if (d <= len2) continue;
                double gap = std::min(d - len2, 1.0 - d);  // shortest way back to the arc
                if (gap <= h * 1.0001)
                    spill = std::max(spill, g.values[k]);
                else
                    escaped = std::max(escaped, g.values[k]);
                g.values[k] = 0.0;
            }
            if (escaped > kSpillTol)
                throw std::runtime_error("transfer_step: density escaped the propagated support");
            if (stats) stats->clamp_spill = spill;
        }
    }
    double mass = mean_of(g.values);
    for (double& v : g.values) v /= mass;
    return g;
}

ContractionReport verify_contraction(GridDensity f, double epsilon, std::size_t n_steps,
                                     double factor_margin, double absolute_floor) {
    f.validate();
    double delta = total_variation(f);
    if (!(epsilon >= 0.0 && epsilon < 1.0 / (1.0 + 4.0 * delta)))
        throw std::domain_error("verify_contraction: coupling too strong for this variation");
    ContractionReport rep;
    rep.initial_tv = delta;
    double denom = 1.0 - epsilon * delta;
    rep.factor = (1.0 + epsilon) / (2.0 * denom * denom);
    rep.tv_series.push_back(delta);
    for (std::size_t k = 0; k < n_steps; ++k) {
        f = transfer_step(f, epsilon);
        double tv = total_variation(f);
        if (tv > (rep.factor + factor_margin) * rep.tv_series.back() + absolute_floor)
            rep.per_step_ok = false;
        rep.tv_series.push_back(tv);
    }
    return rep;
}

double wing_mass(const GridDensity& f) {
    f.validate();
    const double len = f.support.length;
    if (!(len > 0.5 && len < 1.0))
        throw std::domain_error("wing_mass: support must exceed half the circle, not all of it");
    const double h = 1.0 / static_cast<double>(f.m);
    double acc = 0.0;
    for (std::size_t k = 0; k < f.m; ++k) {
        double t = reduce(static_cast<double>(k) * h - f.support.start);
        if (t < len - 0.5 || (t >= 0.5 && t <= len)) acc += f.values[k];
    }
    return acc * h;
}

double collapse_threshold(const GridDensity& f) {
    double c = wing_mass(f);
    if (!(c < 0.25))
        throw std::domain_error("collapse_threshold: wing mass must stay below a quarter");
    return (f.support.length - 0.25) / (f.support.length - c);
}

CollapseReport one_step_collapse(const GridDensity& f, double epsilon) {
    CollapseReport rep;
    rep.wing_mass = wing_mass(f);
    rep.threshold = collapse_threshold(f);
    if (!(epsilon >= rep.threshold && epsilon < 1.0))
        throw std::domain_error("one_step_collapse: coupling below the collapse threshold");
    rep.predicted_length =
        2.0 * (1.0 - epsilon) * f.support.length + 2.0 * epsilon * rep.wing_mass;
    rep.result = transfer_step(f, epsilon);
    return rep;
}

std::vector<double> monte_carlo_pushforward(const GridDensity& f, double epsilon,
                                            std::size_t n_samples, std::uint64_t master_seed,
                                            std::size_t n_bins) {
    f.validate();
    if (n_samples < 10000)
        throw std::invalid_argument("monte_carlo_pushforward: need at least 1e4 samples");
    if (n_bins < 2) throw std::invalid_argument("monte_carlo_pushforward: need at least 2 bins");
    DensityMapEval eval(f, epsilon);
    const std::size_t m = f.m;
    const double h = 1.0 / static_cast<double>(m);

    // raw node CDF of the interpolant
    std::vector<double> cdf(m + 1, 0.0);
    for (std::size_t k = 0; k < m; ++k)
        cdf[k + 1] = cdf[k] + 0.5 * h * (f.values[k] + f.values[(k + 1) % m]);
    const double total = cdf[m];

    StreamRng rng(master_seed, "mc-pushforward", 0);
    std::vector<double> density(n_bins, 0.0);
    for (std::size_t i = 0; i < n_samples; ++i) {
        double u = (static_cast<double>(i) + rng.next_unit()) / static_cast<double>(n_samples);
        double target = u * total;
        auto it = std::upper_bound(cdf.begin(), cdf.end(), target);
        auto k = static_cast<std::size_t>(
            std::clamp<std::ptrdiff_t>(it - cdf.begin() - 1, 0, static_cast<std::ptrdiff_t>(m) - 1));
        double want = (target - cdf[k]) / h;  // mass inside the cell, in value units
        double f0 = f.values[k];
        double f1 = f.values[(k + 1) % m];
        double a = 0.5 * (f1 - f0);
        double theta;
        if (std::fabs(a) > 1e-12 * (f0 + std::fabs(a) + 1.0)) {
            double disc = std::max(f0 * f0 + 4.0 * a * want, 0.0);
            theta = (-f0 + std::sqrt(disc)) / (2.0 * a);
        } else if (f0 > 0.0) {
            theta = want / f0;
        } else {
            theta = 0.5;
        }
        theta = std::clamp(theta, 0.0, 1.0);
        double x = (static_cast<double>(k) + theta) * h;
        double y = reduce(eval.forward(std::min(x, 1.0)));
        auto b = std::min(n_bins - 1,
                          static_cast<std::size_t>(y * static_cast<double>(n_bins)));
        density[b] += 1.0;
    }
    double norm = static_cast<double>(n_samples) / static_cast<double>(n_bins);
    for (double& d : density) d /= norm;
    return density;
}

double l1_binned_distance(const GridDensity& f, const std::vector<double>& bin_density) {
    const std::size_t n_bins = bin_density.size();
    if (n_bins == 0 || f.m % n_bins != 0)
        throw std::invalid_argument("l1_binned_distance: bin count must divide the grid");
    const std::size_t per = f.m / n_bins;
    double l1 = 0.0;
    for (std::size_t b = 0; b < n_bins; ++b) {
        double p = 0.0;
        for (std::size_t j = 0; j < per; ++j) p += f.values[b * per + j];
        l1 += std::fabs(p / static_cast<double>(per) - bin_density[b]);
    }
    return l1 / static_cast<double>(n_bins);
}

}  // namespace meanfield
