#pragma once

// Full 2^n sign-assignment enumeration for the exact two-sided signed-rank
// p-value; feasible for n <= ~16.

#include <cmath>
#include <cstddef>
#include <vector>

namespace oracle {

inline double wilcoxon_enumeration_p(const std::vector<double>& diffs) {
    std::vector<double> d;
    for (double v : diffs)
        if (v != 0.0) d.push_back(v);
    const size_t n = d.size();

    std::vector<double> mags;
    for (double v : d) mags.push_back(std::fabs(v));
    std::vector<double> rank(n);
    for (size_t i = 0; i < n; ++i) {
        size_t below = 0, equal = 0;
        for (size_t j = 0; j < n; ++j) {
            if (mags[j] < mags[i]) ++below;
            if (mags[j] == mags[i]) ++equal;
        }
        rank[i] = below + 0.5 * (equal + 1);
    }
    double observed = 0.0;
    for (size_t i = 0; i < n; ++i)
        if (d[i] > 0.0) observed += rank[i];

    size_t at_or_below = 0, at_or_above = 0;
    const size_t total = size_t{1} << n;
    for (size_t mask = 0; mask < total; ++mask) {
        double w = 0.0;
        for (size_t i = 0; i < n; ++i)
            if (mask & (size_t{1} << i)) w += rank[i];
        if (w <= observed + 1e-12) ++at_or_below;
        if (w >= observed - 1e-12) ++at_or_above;
    }
    const double denom = static_cast<double>(total);
    const double p = 2.0 * (at_or_below < at_or_above ? at_or_below : at_or_above) / denom;
    return p > 1.0 ? 1.0 : p;
}

} // namespace oracle
