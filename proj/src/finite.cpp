#include "meanfield/finite.hpp"

#include <cmath>
#include <string>

namespace meanfield {

void CouplingParams::validate() const {
    if (!(epsilon >= 0.0 && epsilon < 1.0))
        throw std::invalid_argument("epsilon out of range [0,1): " + std::to_string(epsilon));
    if (n_sites < 2) throw std::invalid_argument("n_sites must be at least 2");
}

Config step_finite(const Config& x, const CouplingParams& p) {
    p.validate();
    if (x.size() != p.n_sites)
        throw std::invalid_argument("configuration size does not match n_sites");
    return step_finite(x, p.epsilon);
}

Config step_finite(const Config& x, double eps) {
    const std::size_t n = x.size();
    Config out(n);
    const double w = eps / static_cast<double>(n);
    for (std::size_t s = 0; s < n; ++s) {
        double coup = 0.0;
        for (std::size_t r = 0; r < n; ++r) coup += signed_distance(x[r] - x[s]);
        out[s] = reduce(2.0 * (x[s] + w * coup));
    }
    return out;
}

FactorN2 to_factor_n2(const Config& cfg) {
    if (cfg.size() != 2) throw std::invalid_argument("to_factor_n2: need exactly 2 sites");
    return {reduce(cfg[0] + cfg[1]), reduce(cfg[0] - cfg[1])};
}

FactorN2 step_factor_n2(const FactorN2& fc, double eps) {
    return {reduce(2.0 * fc.u), reduce(2.0 * fc.v - 2.0 * eps * signed_distance(fc.v))};
}

double map_H(double v, double eps) {
    v = reduce(v);
    if (v == 0.5) return eps;
    if (v < 0.5) return reduce(2.0 * (1.0 - eps) * v);
    return reduce(2.0 * (1.0 - eps) * v + 2.0 * eps - 1.0);
}

double map_L(double w, double eps) {
    if (!(eps >= 0.0 && eps < 0.5))
        throw std::domain_error("map_L: defined for eps in [0, 1/2) only");
    if (!(w >= 0.0 && w <= 1.0)) throw std::domain_error("map_L: argument outside [0,1]");
    if (w < 0.5) return 2.0 * (1.0 - eps) * w + eps;
    return 2.0 * (1.0 - eps) * w + eps - 1.0;
}

markov_boundary_error::markov_boundary_error(double eps)
    : std::domain_error("Markov boundary case at epsilon = " + std::to_string(eps)) {}

RenormDepth renormalization_depth(double eps) {
    if (!(eps >= 0.0 && eps < 0.5))
        throw std::domain_error("renormalization_depth: defined for eps in [0, 1/2) only");
    const double slope = 2.0 * (1.0 - eps);
    const double t = std::log2(slope);  // in (0, 1]
    const double y = -std::log2(t);     // depth before flooring; boundaries at integers >= 1
    const long m0 = static_cast<long>(std::floor(y));
    for (long m = std::max(1L, m0); m <= m0 + 1; ++m) {
        // slope boundary 2^(2^-m) expressed as a coupling value
        const double eps_m = 1.0 - std::exp2(std::exp2(-static_cast<double>(m)) - 1.0);
        if (std::fabs(eps - eps_m) <= 1e-12) throw markov_boundary_error(eps);
    }
    const int n = static_cast<int>(m0);
    return {n, 1 << n};
}

FactorN3 to_factor_n3(const Config& cfg) {
    if (cfg.size() != 3) throw std::invalid_argument("to_factor_n3: need exactly 3 sites");
    return {reduce(cfg[0] + cfg[1] + cfg[2]), reduce(cfg[0] - cfg[1]), reduce(cfg[1] - cfg[2])};
}

FactorN3 step_factor_n3(const FactorN3& fc, double eps) {
    const double gu = signed_distance(fc.u);
    const double gv = signed_distance(fc.v);
    const double guv = signed_distance(fc.u + fc.v);
    const double k = 2.0 * eps / 3.0;
    return {reduce(2.0 * fc.w),
            reduce(2.0 * fc.u + k * (gv - guv - 2.0 * gu)),
            reduce(2.0 * fc.v + k * (gu - guv - 2.0 * gv))};
}

double diagonal_map_n3(double u, double eps) {
    return reduce(2.0 * u - (2.0 * eps / 3.0) * (signed_distance(u) + signed_distance(2.0 * u)));
}

}  // namespace meanfield
