#include "meanfield/classify.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace meanfield {

const char* to_string(ComponentLabel l) {
    switch (l) {
        case ComponentLabel::I: return "I";
        case ComponentLabel::II: return "II";
        case ComponentLabel::III: return "III";
        case ComponentLabel::IV: return "IV";
        case ComponentLabel::V: return "V";
        case ComponentLabel::VI: return "VI";
        case ComponentLabel::Boundary: return "Boundary";
    }
    return "?";
}

std::array<double, 3> pairwise_arcs(const Config& cfg) {
    if (cfg.size() != 3) throw std::invalid_argument("pairwise_arcs: need exactly 3 sites");
    return {ccw_arc(cfg[0], cfg[1]), ccw_arc(cfg[1], cfg[2]), ccw_arc(cfg[2], cfg[0])};
}

ComponentLabel classify_component(const Config& cfg, double tie_tol) {
    const auto [a, b, c] = pairwise_arcs(cfg);
    if (std::fabs(a - b) < tie_tol || std::fabs(b - c) < tie_tol || std::fabs(a - c) < tie_tol)
        return ComponentLabel::Boundary;
    if (a < c && c < b) return ComponentLabel::I;
    if (a < b && b < c) return ComponentLabel::II;
    if (b < a && a < c) return ComponentLabel::III;
    if (b < c && c < a) return ComponentLabel::IV;
    if (c < b && b < a) return ComponentLabel::V;
    if (c < a && a < b) return ComponentLabel::VI;
    return ComponentLabel::Boundary;  // unreachable off ties
}

double min_gap(const Config& cfg) {
    const auto [a, b, c] = pairwise_arcs(cfg);
    return std::min({a, b, c});
}

double config_diameter(const Config& cfg) {
    // largest gap between cyclically adjacent sites, complemented
    Config s = cfg;
    std::sort(s.begin(), s.end());
    double biggest = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        double next = i + 1 < s.size() ? s[i + 1] : s[0] + 1.0;
        biggest = std::max(biggest, next - s[i]);
    }
    return 1.0 - biggest;
}

LimitStateN3 detect_limit_state(Config cfg, double eps, std::size_t max_steps, double tol) {
    if (!(eps > 0.5)) throw std::domain_error("detect_limit_state: requires eps > 1/2");
    if (cfg.size() != 3) throw std::invalid_argument("detect_limit_state: need exactly 3 sites");
    double best_sync = 1.0, best_splay = 1.0;
    for (std::size_t t = 0; t <= max_steps; ++t) {
        double diam = config_diameter(cfg);
        const auto [a, b, c] = pairwise_arcs(cfg);
        double splay = std::max({std::fabs(a - 1.0 / 3.0), std::fabs(b - 1.0 / 3.0),
                                 std::fabs(c - 1.0 / 3.0)});
        if (diam < tol) return {LimitKind::Sync, diam, t};
        if (splay < tol) return {LimitKind::Splay, splay, t};
        best_sync = std::min(best_sync, diam);
        best_splay = std::min(best_splay, splay);
        cfg = step_finite(cfg, eps);
    }
    return {LimitKind::Undecided, std::min(best_sync, best_splay), max_steps};
}

double AttractorCircles::distance_to_union(const Config& cfg) const {
    // removing a circle's offsets turns proximity into a sync question
    if (cfg.size() != 3) throw std::invalid_argument("distance_to_union: need exactly 3 sites");
    double best = 1.0;
    const std::array<std::array<double, 3>, 3> offsets{{{0.0, 0.0, 0.0},
                                                        {0.0, 2.0 / 3.0, 1.0 / 3.0},
                                                        {0.0, 1.0 / 3.0, 2.0 / 3.0}}};
    for (const auto& o : offsets) {
        Config shifted{reduce(cfg[0] - o[0]), reduce(cfg[1] - o[1]), reduce(cfg[2] - o[2])};
        best = std::min(best, config_diameter(shifted));
    }
    return best;
}

AttractorCircles contracting_attractor_circles() { return {}; }

}  // namespace meanfield
