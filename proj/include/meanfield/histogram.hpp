#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "meanfield/circle.hpp"

namespace meanfield {

// Counting histogram over [0,1) with uniform bins.
struct EmpiricalHistogram {
    explicit EmpiricalHistogram(std::size_t bin_count)
        : bins(bin_count), counts(bin_count, 0), total(0) {
        if (bin_count == 0) throw std::invalid_argument("histogram: bin_count must be positive");
    }

    void add(double x) {
        double r = reduce(x);
        auto b = static_cast<std::size_t>(r * static_cast<double>(bins));
        if (b >= bins) b = bins - 1;
        ++counts[b];
        ++total;
    }

    void merge(const EmpiricalHistogram& other) {
        if (other.bins != bins) throw std::invalid_argument("histogram: bin count mismatch");
        for (std::size_t i = 0; i < bins; ++i) counts[i] += other.counts[i];
        total += other.total;
    }

    std::size_t bins;
    std::vector<std::uint64_t> counts;
    std::uint64_t total;
};

// Kolmogorov distance to the uniform distribution, evaluated at bin
// boundaries of the histogram.
inline double ks_distance_to_uniform(const EmpiricalHistogram& h) {
    if (h.total == 0) throw std::invalid_argument("ks_distance_to_uniform: empty histogram");
    double ks = 0.0;
    double cum = 0.0;
    const double tot = static_cast<double>(h.total);
    for (std::size_t i = 0; i < h.bins; ++i) {
        cum += static_cast<double>(h.counts[i]);
        double u = static_cast<double>(i + 1) / static_cast<double>(h.bins);
        ks = std::max(ks, std::abs(cum / tot - u));
    }
    return ks;
}

}  // namespace meanfield
